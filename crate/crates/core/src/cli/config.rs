//! Run parameters: command-line flags and the config file share one schema.
//!
//! The config file is TOML restricted to flat `key = value` pairs, at the top
//! level or inside one section per subcommand. Precedence, highest first:
//! flag, `[command]` section, top level, built-in default.

use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Deserializer, Serialize};

use super::CliError;

/// Accepts a string or an array of scalars and keeps the comma-joined text.
fn list_or_string<'de, D: Deserializer<'de>>(d: D) -> Result<Option<String>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Text(String),
        Items(Vec<toml::Value>),
    }
    Ok(match Option::<Raw>::deserialize(d)? {
        None => None,
        Some(Raw::Text(s)) => Some(s),
        Some(Raw::Items(v)) => Some(
            v.iter()
                .map(|x| match x {
                    toml::Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect::<Vec<_>>()
                .join(","),
        ),
    })
}

macro_rules! params {
    ($( $(#[$meta:meta])* $field:ident : $ty:ty ),* $(,)?) => {
        /// Every tunable of every subcommand; unset keys fall through to the
        /// next source.
        #[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
        #[serde(deny_unknown_fields)]
        pub struct Params {
            $( $(#[$meta])* pub $field: Option<$ty>, )*
        }

        impl Params {
            /// Fields of `self`, with gaps filled from `other`.
            pub fn or(self, other: Params) -> Params {
                Params { $( $field: self.$field.or(other.$field), )* }
            }
        }
    };
}

params! {
    /// Coefficient sequence: gef, gamma:α, gauss2:α, lacunary, list:a0,a1,…, holeblocks:a,b,M
    #[arg(long)]
    seq: String,
    /// Parameter for `gamma` / `gauss2` given without one, and for realzeros
    #[arg(long)]
    alpha: f64,
    /// gaussian, rademacher or steinhaus
    #[arg(long)]
    ensemble: String,
    /// Single radius
    #[arg(long)]
    r: f64,
    /// Comma-separated radii
    #[arg(long)]
    #[serde(default, deserialize_with = "list_or_string")]
    r_grid: String,
    #[arg(long)]
    trials: u64,
    #[arg(long)]
    seed: u64,
    /// Worker threads (results do not depend on it)
    #[arg(long)]
    threads: usize,
    /// Output directory (RANDFUN_OUT overrides it)
    #[arg(long)]
    out: PathBuf,
    /// Also write SVG plots
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    emit_plots: bool,
    /// Tail tolerance of the truncation certificate
    #[arg(long)]
    tol_tail: f64,
    /// Exponent η in δ = m^(−η)
    #[arg(long)]
    eta: f64,
    /// lacunary: window index k
    #[arg(long)]
    k: u32,
    /// sectors: number of equal sectors
    #[arg(long)]
    sectors: usize,
    /// sectors: slack ε in s^(3/4+ε)
    #[arg(long)]
    epsilon: f64,
    /// realzeros: largest disk index m
    #[arg(long)]
    m_max: usize,
    /// realzeros: number of leading coefficients whose signs are enumerated
    #[arg(long)]
    pattern_bits: u32,
    /// counterexample: truncation degree
    #[arg(long)]
    degree: usize,
    /// asymptotics: complex β, e.g. 1, 2i, 0.5-1.5i
    #[arg(long)]
    beta: String,
    /// asymptotics: last coefficient index
    #[arg(long)]
    n_max: usize,
    /// moments: comma-separated q values
    #[arg(long)]
    #[serde(default, deserialize_with = "list_or_string")]
    q_list: String,
    /// moments: frequencies |n| < width
    #[arg(long)]
    width: usize,
    /// khinchin: comma-separated p values
    #[arg(long)]
    #[serde(default, deserialize_with = "list_or_string")]
    p_list: String,
    /// khinchin: vector dimension
    #[arg(long)]
    dim: usize,
    /// turan: number of frequencies
    #[arg(long)]
    n_freq: usize,
    /// kahane: length of the a_n = 1/√(n+1) profile
    #[arg(long)]
    len: usize,
    /// kahane: comma-separated complex values b
    #[arg(long)]
    #[serde(default, deserialize_with = "list_or_string")]
    b_list: String,
    /// gn: comma-separated N values
    #[arg(long)]
    #[serde(default, deserialize_with = "list_or_string")]
    n_list: String,
    /// covariance: number of points on the circle
    #[arg(long)]
    points: usize,
    /// hole: pre-registered estimate as r,p,se
    #[arg(long)]
    #[serde(default, deserialize_with = "list_or_string")]
    reference: String,
}

/// Parses a config file into `(top level, section for command)`.
pub fn load(path: &Path, command: &str, commands: &[&str]) -> Result<(Params, Params), CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse(&text, command, commands)
}

pub fn parse(text: &str, command: &str, commands: &[&str]) -> Result<(Params, Params), CliError> {
    let table: toml::Table = text.parse().map_err(|e| CliError::Usage(format!("config: {e}")))?;
    let mut top = toml::Table::new();
    let mut section = Params::default();
    for (key, value) in table {
        match value {
            toml::Value::Table(t) => {
                if !commands.contains(&key.as_str()) {
                    return Err(CliError::Usage(format!("config: unknown section `[{key}]`")));
                }
                let p = to_params(t, &format!("[{key}]"))?;
                if key == command {
                    section = p;
                }
            }
            other => {
                top.insert(key, other);
            }
        }
    }
    Ok((to_params(top, "top level")?, section))
}

fn to_params(t: toml::Table, place: &str) -> Result<Params, CliError> {
    if let Some(k) = t.keys().find(|k| k.as_str() == "config") {
        return Err(CliError::Usage(format!("config: `{k}` cannot be set from a config file ({place})")));
    }
    toml::Value::Table(t)
        .try_into::<Params>()
        .map_err(|e| CliError::Usage(format!("config ({place}): {}", e.message())))
}

#[cfg(test)]
mod tests {
    use super::*;

    const CMDS: &[&str] = &["growth", "hole"];

    #[test]
    fn sections_and_precedence() {
        let text = "seed = 3\ntrials = 10\n[hole]\ntrials = 50\nr_grid = [0.25, 0.5]\n[growth]\nr = 2.0\n";
        let (top, sec) = parse(text, "hole", CMDS).unwrap();
        assert_eq!(top.seed, Some(3));
        assert_eq!(sec.trials, Some(50));
        assert_eq!(sec.r_grid.as_deref(), Some("0.25,0.5"));
        let flags = Params {
            trials: Some(7),
            ..Params::default()
        };
        let merged = flags.or(sec).or(top);
        assert_eq!(merged.trials, Some(7));
        assert_eq!(merged.seed, Some(3));
        assert_eq!(merged.r, None);
    }

    #[test]
    fn unknown_keys_rejected() {
        let e = parse("sead = 3\n", "hole", CMDS).unwrap_err();
        assert!(e.to_string().contains("sead"), "{e}");
        let e = parse("[holes]\ntrials = 1\n", "hole", CMDS).unwrap_err();
        assert!(e.to_string().contains("holes"), "{e}");
        assert!(parse("[hole]\nbogus = 1\n", "hole", CMDS).is_err());
    }
}
