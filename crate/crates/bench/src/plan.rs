use serde::{Deserialize, Serialize};

use sahn::{Algorithm, Method};

use crate::{BenchError, Result};

/// Number of mixture components: a fixed count, or `"sqrt"` for ⌈√n⌉.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawModes", into = "RawModes")]
pub enum Modes {
    Count(usize),
    Sqrt,
}

impl Modes {
    pub fn resolve(self, n: usize) -> usize {
        match self {
            Modes::Count(k) => k,
            Modes::Sqrt => (n as f64).sqrt().ceil() as usize,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawModes {
    Count(usize),
    Name(String),
}

impl TryFrom<RawModes> for Modes {
    type Error = String;

    fn try_from(raw: RawModes) -> Result<Modes, String> {
        match raw {
            RawModes::Count(0) => Err("modes must be positive".into()),
            RawModes::Count(k) => Ok(Modes::Count(k)),
            RawModes::Name(s) if s == "sqrt" => Ok(Modes::Sqrt),
            RawModes::Name(s) => Err(format!("unknown modes {:?}, expected a count or \"sqrt\"", s)),
        }
    }
}

impl From<Modes> for RawModes {
    fn from(m: Modes) -> RawModes {
        match m {
            Modes::Count(k) => RawModes::Count(k),
            Modes::Sqrt => RawModes::Name("sqrt".into()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    /// Points from [`gen_gaussian_mixture`](crate::gen_gaussian_mixture).
    Gaussian {
        dim: usize,
        modes: Modes,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        spread: Option<f64>,
    },
    /// A matrix from [`gen_uniform_dissimilarities`](crate::gen_uniform_dissimilarities).
    Uniform,
}

fn three() -> usize {
    3
}

/// One benchmark cell; `repeats` defaults to 3.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanCell {
    pub algorithm: String,
    pub method: String,
    pub n: usize,
    pub generator: Generator,
    pub seed: u64,
    #[serde(default = "three")]
    pub repeats: usize,
}

impl PlanCell {
    /// Parses the names and checks that the cell can run.
    pub(crate) fn resolve(&self, index: usize) -> Result<(Algorithm, Method)> {
        let fail = |message: String| BenchError::Plan { cell: index, message };
        let algorithm: Algorithm = self.algorithm.parse().map_err(|e: sahn::Error| fail(e.to_string()))?;
        let method: Method = self.method.parse().map_err(|e: sahn::Error| fail(e.to_string()))?;
        algorithm.supports(method).map_err(|e| fail(e.to_string()))?;
        if self.n == 0 {
            return Err(fail("n must be positive".into()));
        }
        if self.repeats == 0 {
            return Err(fail("repeats must be positive".into()));
        }
        match self.generator {
            Generator::Uniform if algorithm == Algorithm::GenericVariant => Err(fail(
                "generic-variant needs vector data; use the gaussian generator".into(),
            )),
            Generator::Gaussian { dim: 0, .. } => Err(fail("dim must be positive".into())),
            Generator::Gaussian { spread: Some(s), .. } if !(s.is_finite() && s >= 0.0) => {
                Err(fail("spread must be finite and nonnegative".into()))
            }
            _ => Ok((algorithm, method)),
        }
    }
}

pub fn parse_plan(json: &str) -> Result<Vec<PlanCell>> {
    Ok(serde_json::from_str(json)?)
}

/// Every algorithm against each scheme it supports on 3-D Gaussian data
/// with five modes, for n up to 2000.
pub fn default_plan() -> Vec<PlanCell> {
    let mut plan = Vec::new();
    for method in Method::NAMED {
        for algorithm in [
            Algorithm::Mst,
            Algorithm::NnChain,
            Algorithm::Generic,
            Algorithm::Anderberg,
        ] {
            if algorithm.supports(method).is_err() {
                continue;
            }
            for (i, n) in [250, 500, 1000, 2000].into_iter().enumerate() {
                plan.push(PlanCell {
                    algorithm: algorithm.name().into(),
                    method: method.to_string(),
                    n,
                    generator: Generator::Gaussian {
                        dim: 3,
                        modes: Modes::Count(5),
                        spread: None,
                    },
                    seed: i as u64,
                    repeats: 3,
                });
            }
        }
    }
    plan
}
