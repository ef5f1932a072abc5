use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::monomial::{cmp_degrevlex, cmp_lex, Monomial};

/// Term orders. Variable 0 is the largest variable in every order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    Lex,
    DegRevLex,
    /// Block order: the listed variables are compared first (degrevlex on the
    /// block), then the remaining ones (degrevlex).
    Elimination(Vec<usize>),
}

impl Default for MonomialOrder {
    fn default() -> Self {
        MonomialOrder::DegRevLex
    }
}

impl std::str::FromStr for MonomialOrder {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "lex" => Ok(MonomialOrder::Lex),
            "degrevlex" | "grevlex" => Ok(MonomialOrder::DegRevLex),
            _ => Err(format!("unknown monomial order {s:?}")),
        }
    }
}

/// A monomial comparator with block data resolved for a given ring size.
#[derive(Clone, Debug)]
pub(crate) enum Comparator {
    Lex,
    DegRevLex,
    Block { first: Vec<usize>, rest: Vec<usize> },
}

impl Comparator {
    pub(crate) fn new(order: &MonomialOrder, nvars: usize) -> Self {
        match order {
            MonomialOrder::Lex => Comparator::Lex,
            MonomialOrder::DegRevLex => Comparator::DegRevLex,
            MonomialOrder::Elimination(block) => {
                let mut in_block = vec![false; nvars];
                for &i in block {
                    in_block[i] = true;
                }
                let first = (0..nvars).filter(|&i| in_block[i]).collect();
                let rest = (0..nvars).filter(|&i| !in_block[i]).collect();
                Comparator::Block { first, rest }
            }
        }
    }

    pub(crate) fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            Comparator::Lex => cmp_lex(a, b),
            Comparator::DegRevLex => cmp_degrevlex(a, b),
            Comparator::Block { first, rest } => {
                block_cmp(a, b, first).then_with(|| block_cmp(a, b, rest))
            }
        }
    }
}

fn block_cmp(a: &Monomial, b: &Monomial, vars: &[usize]) -> Ordering {
    let ea = a.exponents();
    let eb = b.exponents();
    let da: u32 = vars.iter().map(|&i| ea[i] as u32).sum();
    let db: u32 = vars.iter().map(|&i| eb[i] as u32).sum();
    da.cmp(&db).then_with(|| {
        for &i in vars.iter().rev() {
            if ea[i] != eb[i] {
                return eb[i].cmp(&ea[i]);
            }
        }
        Ordering::Equal
    })
}

impl MonomialOrder {
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        Comparator::new(self, a.nvars()).cmp(a, b)
    }
}
