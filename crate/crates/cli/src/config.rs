//! Command-line surface and the validated run configuration.

use std::fmt;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use hkrlab::exactalg::{factor, is_prime, BaseRing};
use hkrlab::hochschild::FPGradedAlgebra;
use hkrlab::witt::{FiniteRing, MAX_M, MAX_P};
use num_traits::ToPrimitive;
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "hkrlab", version, about = "Exact Witt, Hochschild and Cartier computations with deterministic reports")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Include per-stage wall-clock times in the report. Off by default so
    /// that reports stay byte-identical across runs.
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapArg {
    FrobeniusMinusId,
    Frobenius,
    GpAt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    Bar,
    DeRham,
}

#[derive(Subcommand, Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Witt addition, multiplication, negation and Frobenius polynomials.
    WittLaw {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: usize,
    },
    /// Kernel of F - [a] on W_m(R) for a finite ring R.
    WittEnumerate {
        /// `F_q`, `F_p[e]/(e^2)` or `Z/n` with n a prime power.
        #[arg(long)]
        ring: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value_t = MapArg::FrobeniusMinusId)]
        map: MapArg,
        /// Element label for `--map gp-at`, e.g. `t+1`.
        #[arg(long)]
        a: Option<String>,
    },
    /// Hochschild homology in one internal degree.
    Hh {
        /// `BASE[x(w1),y(w2)]/(rel1,rel2)`; weights default to 1.
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        degree: u32,
        /// Largest homological degree reported.
        #[arg(long, default_value_t = 4)]
        window: usize,
    },
    /// Negative cyclic homology modulo u^U.
    Hcminus {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        u: usize,
        #[arg(long, value_enum, default_value_t = Model::Bar)]
        model: Model,
    },
    /// Homology of the brutal truncation of the de Rham complex.
    Dr {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        degree: u32,
        /// Truncation level i of the complex of forms of degree >= i.
        #[arg(long, default_value_t = 0)]
        level: i64,
    },
    /// HKR antisymmetrization and Connes operator checks.
    HkrCheck {
        #[arg(long)]
        algebra: String,
        /// Largest internal degree.
        #[arg(long)]
        degree: u32,
        #[arg(long, default_value_t = 3)]
        q_max: usize,
    },
    /// Ext of the exterior algebra and the truncated polynomial tower.
    CircleExt {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 3)]
        m_max: u32,
        /// Largest cohomological index s of the Ext table.
        #[arg(long, default_value_t = 4)]
        bound: usize,
    },
    /// Cartier duality of alpha_{p^m} against the Witt kernel.
    Cartier {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: usize,
    },
    /// The interpolation formal group law X + Y + lambda XY.
    Fgl {
        #[arg(long, default_value = "1", allow_negative_numbers = true)]
        lambda: i64,
        #[arg(long, default_value = "Z")]
        ring: String,
        /// Truncation order N.
        #[arg(long)]
        n: u32,
        /// Also compare the mod-p reductions with mu_{p^m} and alpha_{p^m}.
        #[arg(long)]
        p: Option<u64>,
    },
    /// Every acceptance criterion.
    AllAcceptance,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::WittLaw { .. } => "witt-law",
            Command::WittEnumerate { .. } => "witt-enumerate",
            Command::Hh { .. } => "hh",
            Command::Hcminus { .. } => "hcminus",
            Command::Dr { .. } => "dr",
            Command::HkrCheck { .. } => "hkr-check",
            Command::CircleExt { .. } => "circle-ext",
            Command::Cartier { .. } => "cartier",
            Command::Fgl { .. } => "fgl",
            Command::AllAcceptance => "all-acceptance",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UsageError {
    pub field: &'static str,
    pub message: String,
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid value for --{}: {}", self.field.replace('_', "-"), self.message)
    }
}

impl std::error::Error for UsageError {}

fn usage(field: &'static str, message: impl Into<String>) -> UsageError {
    UsageError {
        field,
        message: message.into(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub command: Command,
    pub format: Format,
    #[serde(skip)]
    pub output: Option<PathBuf>,
    #[serde(skip)]
    pub timings: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            format: Format::Json,
            output: None,
            timings: false,
        }
    }

    pub fn from_cli(cli: Cli) -> Result<Self, UsageError> {
        let cfg = RunConfig {
            command: cli.command,
            format: cli.format,
            output: cli.output,
            timings: cli.timings,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Range checks against the module budgets, done before any work starts.
    pub fn validate(&self) -> Result<(), UsageError> {
        match &self.command {
            Command::WittLaw { p, m } => witt_params(*p, *m),
            Command::WittEnumerate { ring, p, m, map, a } => {
                witt_params(*p, *m)?;
                let r = parse_finite_ring(ring)?;
                match (map, a) {
                    (MapArg::GpAt, None) => Err(usage("a", "--map gp-at needs an element")),
                    (MapArg::GpAt, Some(a)) => r.parse(a).map(|_| ()).ok_or_else(|| usage("a", format!("'{a}' is not an element of {}", r.kind()))),
                    (_, Some(_)) => Err(usage("a", "only used with --map gp-at")),
                    _ => Ok(()),
                }
            }
            Command::Hh { algebra, degree, window } => {
                parse_algebra(algebra)?;
                bounded("degree", *degree as usize, 0, 24)?;
                bounded("window", *window, 0, 12)
            }
            Command::Hcminus { algebra, degree, u, .. } => {
                parse_algebra(algebra)?;
                bounded("degree", *degree as usize, 0, 24)?;
                bounded("u", *u, 1, 12)
            }
            Command::Dr { algebra, degree, level } => {
                parse_algebra(algebra)?;
                bounded("degree", *degree as usize, 0, 24)?;
                if *level < 0 {
                    return Err(usage("level", "must be >= 0"));
                }
                Ok(())
            }
            Command::HkrCheck { algebra, degree, q_max } => {
                let a = parse_algebra(algebra)?;
                if !a.is_smooth() {
                    return Err(usage("algebra", "HKR needs a polynomial algebra without relations"));
                }
                if matches!(a.ring(), BaseRing::CyclicRing { .. }) {
                    return Err(usage("algebra", "HKR is not available over Z/p^k"));
                }
                bounded("degree", *degree as usize, 0, 12)?;
                bounded("q_max", *q_max, 0, 6)
            }
            Command::CircleExt { p, m_max, bound } => {
                one_of("p", *p, &[2, 3])?;
                bounded("m_max", *m_max as usize, 2, 3)?;
                bounded("bound", *bound, 0, 10)
            }
            Command::Cartier { p, m } => {
                one_of("p", *p, &[2, 3])?;
                bounded("m", *m, 1, 2)
            }
            Command::Fgl { ring, n, p, .. } => {
                let r: BaseRing = ring.parse().map_err(|e: hkrlab::Error| usage("ring", e.to_string()))?;
                bounded("n", *n as usize, 1, 12)?;
                if let Some(p) = p {
                    one_of("p", *p, &[2, 3])?;
                    bounded("n", *n as usize, 1, 6).map_err(|e| usage("n", format!("{} when --p is given", e.message)))?;
                }
                if matches!(r, BaseRing::CyclicRing { .. } | BaseRing::PLocalIntegers { .. }) {
                    return Err(usage("ring", "use Z, Q or F_p"));
                }
                Ok(())
            }
            Command::AllAcceptance => Ok(()),
        }
    }
}

fn bounded(field: &'static str, v: usize, lo: usize, hi: usize) -> Result<(), UsageError> {
    if (lo..=hi).contains(&v) {
        Ok(())
    } else {
        Err(usage(field, format!("{v} is outside {lo}..={hi}")))
    }
}

fn one_of(field: &'static str, v: u64, allowed: &[u64]) -> Result<(), UsageError> {
    if allowed.contains(&v) {
        Ok(())
    } else {
        Err(usage(field, format!("{v} is not one of {allowed:?}")))
    }
}

fn witt_params(p: u64, m: usize) -> Result<(), UsageError> {
    if !is_prime(p) || p > MAX_P {
        return Err(usage("p", format!("{p} is not a prime <= {MAX_P}")));
    }
    bounded("m", m, 1, MAX_M)
}

pub fn parse_algebra(s: &str) -> Result<FPGradedAlgebra, UsageError> {
    FPGradedAlgebra::parse(s).map_err(|e| usage("algebra", e.to_string()))
}

/// `F_q` with q a prime power, `F_p[e]/(e^2)`, or `Z/n` (also `Z/p^k`) with n
/// a prime power.
pub fn parse_finite_ring(s: &str) -> Result<FiniteRing, UsageError> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = |why: &str| usage("ring", format!("'{s}': {why}"));
    let prime_power = |t: &str| -> Result<(u64, u32), UsageError> {
        if let Some((p, k)) = t.split_once('^') {
            let p: u64 = p.parse().map_err(|_| bad("expected a number"))?;
            let k: u32 = k.parse().map_err(|_| bad("expected an exponent"))?;
            return if is_prime(p) && k >= 1 { Ok((p, k)) } else { Err(bad("not a prime power")) };
        }
        let n: u64 = t.parse().map_err(|_| bad("expected a number"))?;
        match factor(&n.into()).as_slice() {
            [(p, k)] => Ok((p.to_u64().ok_or_else(|| bad("too large"))?, *k)),
            _ => Err(bad("not a prime power")),
        }
    };
    let built = if let Some(p) = s.strip_prefix("F_").and_then(|r| r.strip_suffix("[e]/(e^2)")) {
        let p: u64 = p.parse().map_err(|_| bad("expected a prime"))?;
        FiniteRing::dual_numbers(p)
    } else if let Some(q) = s.strip_prefix("F_") {
        let (p, k) = prime_power(q)?;
        FiniteRing::field(p, k)
    } else if let Some(n) = s.strip_prefix("Z/") {
        let (p, k) = prime_power(n)?;
        FiniteRing::cyclic(p, k)
    } else {
        return Err(bad("expected F_q, F_p[e]/(e^2) or Z/n"));
    };
    built.map_err(|e| bad(&e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_ring_specs() {
        assert_eq!(parse_finite_ring("F_4").unwrap().size(), 4);
        assert_eq!(parse_finite_ring("F_3[e]/(e^2)").unwrap().size(), 9);
        assert_eq!(parse_finite_ring("Z/8").unwrap().size(), 8);
        assert_eq!(parse_finite_ring("Z/3^2").unwrap().kind().to_string(), "Z/9");
        assert_eq!(parse_finite_ring("Z/6").unwrap_err().field, "ring");
        assert!(parse_finite_ring("Q").is_err());
    }

    #[test]
    fn offending_field_is_named() {
        let bad = |c: Command| RunConfig::new(c).validate().unwrap_err();
        assert_eq!(bad(Command::WittLaw { p: 4, m: 2 }).field, "p");
        assert_eq!(bad(Command::WittLaw { p: 2, m: 0 }).field, "m");
        assert_eq!(bad(Command::Cartier { p: 5, m: 1 }).field, "p");
        let hh = Command::Hh {
            algebra: "Q[x".into(),
            degree: 3,
            window: 4,
        };
        assert_eq!(bad(hh).field, "algebra");
        let e = Command::WittEnumerate {
            ring: "F_2".into(),
            p: 2,
            m: 2,
            map: MapArg::GpAt,
            a: None,
        };
        assert_eq!(bad(e).to_string(), "invalid value for --a: --map gp-at needs an element");
        let f = Command::Fgl {
            lambda: 1,
            ring: "Z".into(),
            n: 8,
            p: Some(2),
        };
        assert_eq!(bad(f).field, "n");
    }

    #[test]
    fn clap_surface() {
        <Cli as clap::CommandFactory>::command().debug_assert();
        let cli = Cli::try_parse_from(["hkrlab", "fgl", "--lambda", "-1", "--n", "4"]).unwrap();
        assert_eq!(
            cli.command,
            Command::Fgl {
                lambda: -1,
                ring: "Z".into(),
                n: 4,
                p: None
            }
        );
    }
}
