//! Resolved run configuration. Every report embeds the `RunConfig` that
//! produced it, and feeding that object back through `fqeuclid run` repeats
//! the run exactly.

use fqeuclid::{Field, FieldElement, QuadraticForm};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, Result};
use crate::format::{parse_element, FormFile, PatternFile, SubsetSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub p: u32,
    pub r: u32,
    pub modulus: Option<Vec<u32>>,
    /// Field orders to sweep; replaces `p`/`r` when present.
    pub q_grid: Option<Vec<u32>>,
    pub d: usize,
    pub form: FormSpec,
    pub colors: ColorSelection,
    pub seed: u64,
    pub format: OutputFormat,
    pub oracle_cap: usize,
    pub constant_c: f64,
    pub timing: bool,
    pub command: CommandSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FormSpec {
    /// `"identity"` or `"twisted"` (`diag(1, …, 1, g)`, `g` the least non-square).
    Named(String),
    Explicit(FormFile),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ColorSelection {
    /// Only `"all"` is accepted.
    All(String),
    List(Vec<Value>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum LambdaMode {
    /// Certified spectral maximum plus slack.
    Spectral,
    /// `2q^((d-1)/2)`.
    Theoretical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase", deny_unknown_fields)]
pub enum CommandSpec {
    Sphere {
        points: bool,
    },
    Spectrum {
        fast: bool,
        dense_check: bool,
    },
    Certify,
    Mixing {
        samples: usize,
        lambda_mode: LambdaMode,
        lambda_scale: f64,
    },
    Kaleido {
        k: usize,
        n_edges: usize,
        patterns: Vec<PatternFile>,
    },
    Count {
        pattern: PatternFile,
        subset: Option<SubsetSpec>,
    },
    Fdist {
        table: Option<String>,
        expr: Option<String>,
        j: Value,
    },
}

impl CommandSpec {
    pub fn name(&self) -> &'static str {
        match self {
            CommandSpec::Sphere { .. } => "sphere",
            CommandSpec::Spectrum { .. } => "spectrum",
            CommandSpec::Certify => "certify",
            CommandSpec::Mixing { .. } => "mixing",
            CommandSpec::Kaleido { .. } => "kaleido",
            CommandSpec::Count { .. } => "count",
            CommandSpec::Fdist { .. } => "fdist",
        }
    }
}

impl RunConfig {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Fields to run over, in order.
    pub fn fields(&self) -> Result<Vec<Field>> {
        match &self.q_grid {
            None => Ok(vec![Field::new(self.p, self.r, self.modulus.as_deref()).map_err(config)?]),
            Some(grid) => {
                if self.modulus.is_some() {
                    return Err(CliError::Config("modulus cannot be combined with a q grid".into()));
                }
                if grid.is_empty() {
                    return Err(CliError::Config("q grid is empty".into()));
                }
                grid.iter()
                    .map(|&q| {
                        let (p, r) = prime_power(q)
                            .ok_or_else(|| CliError::Config(format!("{} is not a prime power", q)))?;
                        Field::new(p, r, None).map_err(config)
                    })
                    .collect()
            }
        }
    }

    pub fn quadratic_form(&self, f: &Field) -> Result<QuadraticForm> {
        match &self.form {
            FormSpec::Named(n) if n == "identity" => QuadraticForm::identity(f, self.d).map_err(config),
            FormSpec::Named(n) if n == "twisted" => QuadraticForm::twisted(f, self.d).map_err(config),
            FormSpec::Named(n) => Err(CliError::Config(format!("unknown form {:?}", n))),
            FormSpec::Explicit(file) => {
                if file.dim != self.d {
                    return Err(CliError::Config(format!("form has dim {} but d = {}", file.dim, self.d)));
                }
                file.to_form(f)
            }
        }
    }

    pub fn form_label(&self) -> Value {
        match &self.form {
            FormSpec::Named(n) => Value::String(n.clone()),
            FormSpec::Explicit(file) => serde_json::to_value(file).expect("form serializes"),
        }
    }

    /// Selected colors, sorted and deduplicated.
    pub fn color_list(&self, f: &Field) -> Result<Vec<FieldElement>> {
        match &self.colors {
            ColorSelection::All(s) if s == "all" => Ok(f.nonzero_elements().collect()),
            ColorSelection::All(s) => Err(CliError::Config(format!("unknown color selection {:?}", s))),
            ColorSelection::List(items) => {
                let mut out = items
                    .iter()
                    .map(|v| {
                        let e = parse_element(f, v).map_err(CliError::Config)?;
                        if e.is_zero() {
                            Err(CliError::Config("color 0 is not a color".into()))
                        } else {
                            Ok(e)
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                out.sort();
                out.dedup();
                Ok(out)
            }
        }
    }
}

fn config(e: fqeuclid::Error) -> CliError {
    CliError::Config(e.to_string())
}

/// `q = p^r` with `p` prime.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut r = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        r += 1;
    }
    (rest == 1).then_some((p, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RunConfig {
        RunConfig {
            p: 3,
            r: 2,
            modulus: Some(vec![1, 0, 1]),
            q_grid: None,
            d: 2,
            form: FormSpec::Named("identity".into()),
            colors: ColorSelection::List(vec![serde_json::json!([1, 0]), serde_json::json!([0, 1])]),
            seed: 17,
            format: OutputFormat::Json,
            oracle_cap: 1000,
            constant_c: 2.5,
            timing: false,
            command: CommandSpec::Mixing {
                samples: 10,
                lambda_mode: LambdaMode::Spectral,
                lambda_scale: 0.1,
            },
        }
    }

    #[test]
    fn roundtrip_is_byte_identical() {
        let text = sample().to_json();
        let back = RunConfig::from_json(&text).unwrap();
        assert_eq!(back, sample());
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(13), Some((13, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn color_selection() {
        let c = sample();
        let f = &c.fields().unwrap()[0];
        assert_eq!(c.color_list(f).unwrap().len(), 2);
        let mut all = c.clone();
        all.colors = ColorSelection::All("all".into());
        assert_eq!(all.color_list(f).unwrap().len(), 8);
        let mut zero = c.clone();
        zero.colors = ColorSelection::List(vec![serde_json::json!([0, 0])]);
        assert!(zero.color_list(f).is_err());
    }

    #[test]
    fn grid_rejects_non_prime_powers() {
        let mut c = sample();
        c.modulus = None;
        c.q_grid = Some(vec![5, 6]);
        assert!(matches!(c.fields(), Err(CliError::Config(_))));
        c.q_grid = Some(vec![5, 9]);
        assert_eq!(c.fields().unwrap().len(), 2);
    }
}
