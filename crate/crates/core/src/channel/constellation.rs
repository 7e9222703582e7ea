use std::f64::consts::FRAC_1_SQRT_2;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstellationName {
    Bpsk,
    Qpsk,
    Qam8,
}

impl ConstellationName {
    pub fn bits_per_symbol(&self) -> u32 {
        match self {
            ConstellationName::Bpsk => 1,
            ConstellationName::Qpsk => 2,
            ConstellationName::Qam8 => 3,
        }
    }

    pub fn for_bits(bits: u32) -> Option<Self> {
        match bits {
            1 => Some(ConstellationName::Bpsk),
            2 => Some(ConstellationName::Qpsk),
            3 => Some(ConstellationName::Qam8),
            _ => None,
        }
    }
}

impl std::fmt::Display for ConstellationName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ConstellationName::Bpsk => "bpsk",
            ConstellationName::Qpsk => "qpsk",
            ConstellationName::Qam8 => "qam8",
        })
    }
}

impl FromStr for ConstellationName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bpsk" => Ok(ConstellationName::Bpsk),
            "qpsk" => Ok(ConstellationName::Qpsk),
            "qam8" | "8qam" => Ok(ConstellationName::Qam8),
            other => Err(format!("unknown constellation '{other}' (expected bpsk, qpsk or qam8)")),
        }
    }
}

/// Unit-average-energy symbol alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    pub name: ConstellationName,
    pub points: Vec<Complex64>,
    pub bits_per_symbol: u32,
}

impl Constellation {
    pub fn new(name: ConstellationName) -> Self {
        let points = match name {
            ConstellationName::Bpsk => vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
            ConstellationName::Qpsk => [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)]
                .iter()
                .map(|&(re, im)| Complex64::new(re, im) * FRAC_1_SQRT_2)
                .collect(),
            // rectangular 4×2 grid, average energy (5 + 1) / 6 = 1
            ConstellationName::Qam8 => {
                let scale = 6f64.sqrt().recip();
                let mut pts = Vec::with_capacity(8);
                for im in [1.0, -1.0] {
                    for re in [-3.0, -1.0, 1.0, 3.0] {
                        pts.push(Complex64::new(re, im) * scale);
                    }
                }
                pts
            }
        };
        Self { name, points, bits_per_symbol: name.bits_per_symbol() }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn mean_energy(&self) -> f64 {
        self.points.iter().map(|p| p.norm_sqr()).sum::<f64>() / self.points.len() as f64
    }

    pub fn peak_energy(&self) -> f64 {
        self.points.iter().map(|p| p.norm_sqr()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_average_energy_and_distinct_points() {
        for name in [ConstellationName::Bpsk, ConstellationName::Qpsk, ConstellationName::Qam8] {
            let c = Constellation::new(name);
            assert_eq!(c.len(), 1 << c.bits_per_symbol);
            assert!((c.mean_energy() - 1.0).abs() < 1e-15, "{name}");
            for (i, p) in c.points.iter().enumerate() {
                for q in &c.points[i + 1..] {
                    assert!((p - q).norm() > 0.1);
                }
            }
        }
    }

    #[test]
    fn constant_envelope_for_psk() {
        assert!((Constellation::new(ConstellationName::Bpsk).peak_energy() - 1.0).abs() < 1e-15);
        assert!((Constellation::new(ConstellationName::Qpsk).peak_energy() - 1.0).abs() < 1e-15);
        assert!((Constellation::new(ConstellationName::Qam8).peak_energy() - 10.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn names_parse() {
        assert_eq!("8QAM".parse::<ConstellationName>(), Ok(ConstellationName::Qam8));
        assert_eq!(ConstellationName::for_bits(2), Some(ConstellationName::Qpsk));
        assert_eq!(ConstellationName::for_bits(4), None);
    }
}
