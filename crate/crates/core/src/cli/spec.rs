//! Measure specifications accepted on the command line.
//!
//! ```text
//! powerlaw:c=<f>,alpha=<f>
//! halfline:c=<f>,alpha=<f>
//! kaden:mu=<f>,t=<f>
//! atoms:<path.csv>
//! ```

use std::fmt;
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Result, VortexError};
use crate::measures::{
    AtomicMeasure, HalfLineSheet, KadenMeasure, PowerLawRadial, VorticityMeasure,
};

#[derive(Debug, Clone, PartialEq)]
pub enum MeasureSpec {
    PowerLaw { c: f64, alpha: f64 },
    HalfLine { c: f64, alpha: f64 },
    Kaden { mu: f64, t: f64 },
    Atoms { path: PathBuf },
}

fn parse_error(position: usize, token: &str, message: impl Into<String>) -> VortexError {
    VortexError::Parse {
        position,
        token: token.to_string(),
        message: message.into(),
    }
}

/// Parses `key=value` pairs starting at byte offset `base`, requiring exactly
/// the keys in `keys`, in any order.
fn parse_pairs(body: &str, base: usize, keys: &[&str]) -> Result<Vec<f64>> {
    let mut values: Vec<Option<f64>> = vec![None; keys.len()];
    let mut offset = base;
    if body.is_empty() {
        return Err(parse_error(
            base,
            "",
            format!("expected parameters {}", keys.join(", ")),
        ));
    }
    for item in body.split(',') {
        let Some((key, value)) = item.split_once('=') else {
            return Err(parse_error(offset, item, "expected `key=value`"));
        };
        let Some(slot) = keys.iter().position(|k| *k == key) else {
            return Err(parse_error(
                offset,
                key,
                format!("unknown parameter, expected one of {}", keys.join(", ")),
            ));
        };
        if values[slot].is_some() {
            return Err(parse_error(offset, key, "parameter given twice"));
        }
        let value_pos = offset + key.len() + 1;
        let v: f64 = value
            .parse()
            .map_err(|_| parse_error(value_pos, value, "not a decimal number"))?;
        if !v.is_finite() {
            return Err(parse_error(value_pos, value, "must be finite"));
        }
        values[slot] = Some(v);
        offset += item.len() + 1;
    }
    keys.iter()
        .zip(values)
        .map(|(k, v)| v.ok_or_else(|| parse_error(base + body.len(), k, "missing parameter")))
        .collect()
}

impl FromStr for MeasureSpec {
    type Err = VortexError;

    fn from_str(s: &str) -> Result<Self> {
        let Some((family, body)) = s.split_once(':') else {
            return Err(parse_error(0, s, "expected `<family>:<parameters>`"));
        };
        let base = family.len() + 1;
        match family {
            "powerlaw" | "halfline" => {
                let v = parse_pairs(body, base, &["c", "alpha"])?;
                Ok(if family == "powerlaw" {
                    Self::PowerLaw {
                        c: v[0],
                        alpha: v[1],
                    }
                } else {
                    Self::HalfLine {
                        c: v[0],
                        alpha: v[1],
                    }
                })
            }
            "kaden" => {
                let v = parse_pairs(body, base, &["mu", "t"])?;
                Ok(Self::Kaden { mu: v[0], t: v[1] })
            }
            "atoms" => {
                if body.is_empty() {
                    return Err(parse_error(base, "", "expected a CSV path"));
                }
                Ok(Self::Atoms { path: body.into() })
            }
            _ => Err(parse_error(
                0,
                family,
                "unknown family, expected powerlaw, halfline, kaden or atoms",
            )),
        }
    }
}

/// Canonical form; parsing it back yields an equal spec.
impl fmt::Display for MeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PowerLaw { c, alpha } => write!(f, "powerlaw:c={c},alpha={alpha}"),
            Self::HalfLine { c, alpha } => write!(f, "halfline:c={c},alpha={alpha}"),
            Self::Kaden { mu, t } => write!(f, "kaden:mu={mu},t={t}"),
            Self::Atoms { path } => write!(f, "atoms:{}", path.display()),
        }
    }
}

impl MeasureSpec {
    /// Builds the measure, reading the atom file if there is one.
    pub fn build(&self) -> Result<VorticityMeasure> {
        Ok(match self {
            Self::PowerLaw { c, alpha } => PowerLawRadial::new(*c, *alpha)?.into(),
            Self::HalfLine { c, alpha } => HalfLineSheet::new(*c, *alpha)?.into(),
            Self::Kaden { mu, t } => KadenMeasure::new(*mu, *t)?.into(),
            Self::Atoms { path } => {
                let file = File::open(path)
                    .map_err(|e| VortexError::Io(format!("{}: {e}", path.display())))?;
                AtomicMeasure::from_csv(BufReader::new(file))?.into()
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_err(s: &str) -> (usize, String) {
        match s.parse::<MeasureSpec>() {
            Err(VortexError::Parse {
                position, token, ..
            }) => (position, token),
            other => panic!("expected a parse error for {s:?}, got {other:?}"),
        }
    }

    #[test]
    fn parses_each_family() {
        assert_eq!(
            "powerlaw:c=1,alpha=0.5".parse::<MeasureSpec>().unwrap(),
            MeasureSpec::PowerLaw { c: 1.0, alpha: 0.5 }
        );
        assert_eq!(
            "halfline:alpha=0.25,c=2".parse::<MeasureSpec>().unwrap(),
            MeasureSpec::HalfLine {
                c: 2.0,
                alpha: 0.25
            }
        );
        assert_eq!(
            "kaden:mu=0.75,t=1e-3".parse::<MeasureSpec>().unwrap(),
            MeasureSpec::Kaden { mu: 0.75, t: 1e-3 }
        );
        assert_eq!(
            "atoms:dir/a:b.csv".parse::<MeasureSpec>().unwrap(),
            MeasureSpec::Atoms {
                path: "dir/a:b.csv".into()
            }
        );
    }

    #[test]
    fn errors_point_at_the_token() {
        assert_eq!(parse_err("vortex:c=1"), (0, "vortex".into()));
        assert_eq!(parse_err("powerlaw:c=1,alpa=0.5"), (13, "alpa".into()));
        assert_eq!(parse_err("powerlaw:c=x1,alpha=0.5"), (11, "x1".into()));
        assert_eq!(parse_err("kaden:mu=0.75"), (13, "t".into()));
        assert_eq!(parse_err("kaden:mu=0.75,mu=0.6"), (14, "mu".into()));
        assert_eq!(parse_err("kaden:mu=0.75,t"), (14, "t".into()));
        assert_eq!(parse_err("powerlaw"), (0, "powerlaw".into()));
        assert_eq!(parse_err("atoms:"), (6, "".into()));
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "powerlaw:c=1,alpha=0.5",
            "halfline:c=0.1,alpha=0.3333333333333333",
            "kaden:mu=0.9,t=1000",
        ] {
            let spec: MeasureSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
            assert_eq!(spec.to_string().parse::<MeasureSpec>().unwrap(), spec);
        }
    }

    #[test]
    fn invalid_parameters_fail_on_build() {
        let spec: MeasureSpec = "powerlaw:c=1,alpha=1.5".parse().unwrap();
        assert!(matches!(
            spec.build(),
            Err(VortexError::InvalidParameter { .. })
        ));
    }
}
