use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use slackspace_algebra::{MonomialOrder, ResourceLimits};

#[derive(Parser, Debug)]
#[command(name = "slackspace", version, about = "Realization spaces of polytopes and cones, in exact arithmetic")]
pub struct Cli {
    #[command(flatten)]
    pub opts: Options,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// Monomial order; when given, `ideal` prints a reduced Groebner basis.
    #[arg(long, global = true, value_enum)]
    pub order: Option<Order>,
    /// Facets of a reduction, 1-based and comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub facets: Option<Vec<usize>>,
    /// Spanning vertices for facets, e.g. `3=124,5=1:10:11`. Both sides are
    /// 1-based; use `:` between vertices when any exceeds 9.
    #[arg(long, global = true, value_delimiter = ',', value_parser = parse_basis)]
    pub bases: Vec<(usize, Vec<usize>)>,
    #[arg(long, global = true, default_value_t = 24, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_degree: u32,
    #[arg(long, global = true, default_value_t = 20_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_basis: u64,
    /// Seconds allowed for each Groebner computation.
    #[arg(long, global = true, env = "SLACKSPACE_TIME_BUDGET", default_value_t = 600, value_parser = clap::value_parser!(u64).range(1..))]
    pub time_budget: u64,
    /// Checks run concurrently.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: u64,
    /// Write JSON here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Print the stage log of each check.
    #[arg(long, short, global = true)]
    pub verbose: bool,
}

impl Options {
    pub fn limits(&self) -> ResourceLimits {
        ResourceLimits {
            max_degree: self.max_degree,
            max_basis: self.max_basis as usize,
            time_budget: Duration::from_secs(self.time_budget),
            ..ResourceLimits::default()
        }
    }

    /// `--bases` keyed by 1-based facet.
    pub fn bases_map(&self) -> BTreeMap<usize, Vec<usize>> {
        self.bases.iter().cloned().collect()
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Slack matrix of a cone (symbolic) or of V/H data (numeric).
    Slack { input: PathBuf },
    /// Generators of an ideal.
    Ideal {
        #[arg(value_enum)]
        mode: IdealMode,
        /// Cone JSON; not needed for `plucker` with `--k` and `--v`.
        input: Option<PathBuf>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        v: Option<usize>,
    },
    /// Realizability check on cone or job files.
    Check {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Convert between models.
    Convert {
        #[arg(long, value_enum)]
        from: Model,
        #[arg(long, value_enum)]
        to: Model,
        input: PathBuf,
        /// Cone JSON, for conversions that need the combinatorics.
        #[arg(long)]
        cone: Option<PathBuf>,
        /// Map back and check the inverse relation.
        #[arg(long)]
        round_trip: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Lex,
    Degrevlex,
}

impl From<Order> for MonomialOrder {
    fn from(o: Order) -> Self {
        match o {
            Order::Lex => MonomialOrder::Lex,
            Order::Degrevlex => MonomialOrder::DegRevLex,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdealMode {
    Slack,
    Plucker,
    Section,
    Reduced,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    /// Rows are the vectors of a configuration.
    Matrix,
    Plucker,
    Slack,
    Gale,
    /// Plücker vector of the orthogonal complement.
    Dual,
}

fn parse_basis(s: &str) -> Result<(usize, Vec<usize>), String> {
    let (facet, verts) = s.split_once('=').ok_or_else(|| format!("expected facet=vertices, got {s}"))?;
    let facet: usize = facet.trim().parse().map_err(|_| format!("bad facet index {facet}"))?;
    let verts: Vec<usize> = if verts.contains(':') {
        verts.split(':').map(|t| t.trim().parse().map_err(|_| format!("bad vertex {t}"))).collect::<Result<_, _>>()?
    } else {
        verts.chars().map(|c| c.to_digit(10).map(|d| d as usize).ok_or(format!("bad vertex {c}"))).collect::<Result<_, _>>()?
    };
    if facet == 0 || verts.is_empty() || verts.contains(&0) {
        return Err(format!("indices in {s} must be positive"));
    }
    Ok((facet, verts))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_syntax() {
        assert_eq!(parse_basis("3=124").unwrap(), (3, vec![1, 2, 4]));
        assert_eq!(parse_basis("12=1:10:11").unwrap(), (12, vec![1, 10, 11]));
        assert!(parse_basis("3").is_err());
        assert!(parse_basis("0=12").is_err());
        assert!(parse_basis("3=1x").is_err());
    }
}
