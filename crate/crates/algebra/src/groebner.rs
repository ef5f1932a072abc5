//! Buchberger's algorithm with the Gebauer-Moeller criteria.
//!
//! Pairs are selected by the normal strategy (smallest lcm degree), ties
//! broken by colexicographic pair index, so output is deterministic for a
//! fixed order and input sequence. Basis elements are kept monic.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::error::LimitKind;
use crate::limits::{Deadline, ResourceLimits};
use crate::monomial::Monomial;
use crate::order::Comparator;
use crate::scalar::Scalar;

pub(crate) type Terms = Vec<(Monomial, Scalar)>;

/// Extra knobs for a run.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct RunOptions {
    /// Skip pairs whose lcm degree exceeds this (valid truncation only for
    /// homogeneous input under a degree-compatible order).
    pub degree_cap: Option<u32>,
}

pub(crate) struct Reducers<'a> {
    pub cmp: &'a Comparator,
    pub polys: Vec<Terms>,
    lms: Vec<Monomial>,
    masks: Vec<u64>,
    active: Vec<bool>,
}

impl<'a> Reducers<'a> {
    pub fn new(cmp: &'a Comparator) -> Self {
        Reducers { cmp, polys: Vec::new(), lms: Vec::new(), masks: Vec::new(), active: Vec::new() }
    }

    /// Wraps an existing monic basis sorted by `cmp`.
    pub fn from_basis(cmp: &'a Comparator, basis: Vec<Terms>) -> Self {
        let mut r = Reducers::new(cmp);
        for p in basis {
            r.push(p);
        }
        r
    }

    fn push(&mut self, p: Terms) -> usize {
        let lm = p[0].0.clone();
        self.masks.push(lm.divmask());
        self.lms.push(lm);
        self.polys.push(p);
        self.active.push(true);
        self.polys.len() - 1
    }

    fn find_reducer(&self, m: &Monomial, skip: Option<usize>) -> Option<usize> {
        let mask = m.divmask();
        (0..self.polys.len()).find(|&i| {
            self.active[i] && Some(i) != skip && self.masks[i] & !mask == 0 && self.lms[i].divides(m)
        })
    }

    /// Full normal form of `p` (sorted by `cmp`) with respect to the active elements.
    pub fn reduce(&self, p: Terms, skip: Option<usize>, deadline: Option<&Deadline>) -> Result<Terms, LimitKind> {
        let mut done: Terms = Vec::new();
        let mut rest = p;
        let mut head = 0;
        let mut steps = 0u32;
        while head < rest.len() {
            let (m, c) = &rest[head];
            match self.find_reducer(m, skip) {
                None => {
                    done.push(rest[head].clone());
                    head += 1;
                }
                Some(g) => {
                    steps += 1;
                    if steps % 64 == 0 {
                        if let Some(d) = deadline {
                            d.check()?;
                        }
                    }
                    let q = self.lms[g].quotient_of(m);
                    let c = c.clone();
                    rest = sub_scaled(self.cmp, &rest[head + 1..], &c, &q, &self.polys[g][1..]);
                    head = 0;
                }
            }
        }
        Ok(done)
    }
}

/// `a - c * q * b`, where `a` and `b` are sorted descending.
fn sub_scaled(cmp: &Comparator, a: &[(Monomial, Scalar)], c: &Scalar, q: &Monomial, b: &[(Monomial, Scalar)]) -> Terms {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut bi = b.iter().map(|(m, x)| (m.mul(q), x)).peekable();
    while i < a.len() {
        let Some((bm, bx)) = bi.peek() else { break };
        match cmp.cmp(&a[i].0, bm) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((bm.clone(), -(c * *bx)));
                bi.next();
            }
            Ordering::Equal => {
                let v = &a[i].1 - &(c * *bx);
                if !v.is_zero() {
                    out.push((a[i].0.clone(), v));
                }
                i += 1;
                bi.next();
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for (bm, bx) in bi {
        out.push((bm, -(c * bx)));
    }
    out
}

fn make_monic(mut p: Terms) -> Terms {
    if let Some((_, lc)) = p.first() {
        if !lc.is_one() {
            let inv = lc.recip();
            for (_, c) in p.iter_mut() {
                *c = &*c * &inv;
            }
        }
    }
    p
}

fn spoly(r: &Reducers, i: usize, j: usize, lcm: &Monomial) -> Terms {
    let qi = r.lms[i].quotient_of(lcm);
    let qj = r.lms[j].quotient_of(lcm);
    let a: Terms = r.polys[i][1..].iter().map(|(m, c)| (m.mul(&qi), c.clone())).collect();
    sub_scaled(r.cmp, &a, &Scalar::one(), &qj, &r.polys[j][1..])
}

pub(crate) struct Abandon {
    pub kind: LimitKind,
    pub partial: Vec<Terms>,
}

type PairKey = (u32, usize, usize);

struct State<'a> {
    red: Reducers<'a>,
    pairs: BTreeMap<PairKey, Monomial>,
}

impl State<'_> {
    fn update(&mut self, h: usize) {
        let lm_h = self.red.lms[h].clone();
        let old: Vec<usize> = (0..h).filter(|&g| self.red.active[g]).collect();
        let mut c: Vec<(usize, Monomial)> = old.iter().map(|&g| (g, lm_h.lcm(&self.red.lms[g]))).collect();
        let mut d: Vec<(usize, Monomial)> = Vec::new();
        while !c.is_empty() {
            let (g, l) = c.remove(0);
            let coprime = lm_h.is_coprime(&self.red.lms[g]);
            if coprime || !c.iter().chain(d.iter()).any(|(_, l2)| l2.divides(&l)) {
                d.push((g, l));
            }
        }
        let new_pairs: Vec<(usize, Monomial)> =
            d.into_iter().filter(|(g, _)| !lm_h.is_coprime(&self.red.lms[*g])).collect();
        let lms = &self.red.lms;
        self.pairs.retain(|&(_, i, j), l| {
            !(lm_h.divides(l) && lm_h.lcm(&lms[i]) != *l && lm_h.lcm(&lms[j]) != *l)
        });
        for (g, l) in new_pairs {
            self.pairs.insert((l.degree(), h, g), l);
        }
        for g in old {
            if lm_h.divides(&self.red.lms[g]) {
                self.red.active[g] = false;
            }
        }
    }

    fn partial(&self) -> Vec<Terms> {
        (0..self.red.polys.len()).filter(|&i| self.red.active[i]).map(|i| self.red.polys[i].clone()).collect()
    }
}

/// Computes the reduced Groebner basis of the given polynomials (each sorted
/// descending by `cmp`). Output is monic, sorted ascending by leading monomial.
pub(crate) fn buchberger(
    cmp: &Comparator,
    gens: Vec<Terms>,
    limits: &ResourceLimits,
    opts: RunOptions,
) -> Result<Vec<Terms>, Abandon> {
    let deadline = limits.start();
    let mut st = State { red: Reducers::new(cmp), pairs: BTreeMap::new() };
    let abandon = |st: &State, kind| Abandon { kind, partial: st.partial() };

    for g in gens {
        if g.is_empty() {
            continue;
        }
        let h = st.red.reduce(g, None, Some(&deadline)).map_err(|k| abandon(&st, k))?;
        if h.is_empty() {
            continue;
        }
        let h = make_monic(h);
        if h[0].0.is_one() {
            return Ok(vec![h]);
        }
        let idx = st.red.push(h);
        st.update(idx);
    }

    while let Some(((deg, j, i), lcm)) = st.pairs.pop_first() {
        if let Some(cap) = opts.degree_cap {
            if deg > cap {
                break;
            }
        }
        deadline.check().map_err(|k| abandon(&st, k))?;
        let s = spoly(&st.red, i, j, &lcm);
        let h = st.red.reduce(s, None, Some(&deadline)).map_err(|k| abandon(&st, k))?;
        if h.is_empty() {
            continue;
        }
        let h = make_monic(h);
        if h[0].0.is_one() {
            return Ok(vec![h]);
        }
        let hdeg = h.iter().map(|(m, _)| m.degree()).max().unwrap_or(0);
        if hdeg > limits.max_degree {
            return Err(abandon(&st, LimitKind::Degree(limits.max_degree)));
        }
        let idx = st.red.push(h);
        st.update(idx);
        let size = st.red.active.iter().filter(|a| **a).count();
        if size > limits.max_basis {
            return Err(abandon(&st, LimitKind::BasisSize(limits.max_basis)));
        }
    }

    interreduce(st.red, &deadline).map_err(|kind| Abandon { kind, partial: Vec::new() })
}

/// Tail-reduces each active element by the others and sorts ascending.
fn interreduce(mut red: Reducers, deadline: &Deadline) -> Result<Vec<Terms>, LimitKind> {
    let idx: Vec<usize> = (0..red.polys.len()).filter(|&i| red.active[i]).collect();
    for &i in &idx {
        let p = std::mem::take(&mut red.polys[i]);
        let lead = p[0].clone();
        let tail = red.reduce(p[1..].to_vec(), Some(i), Some(deadline))?;
        let mut q = vec![lead];
        q.extend(tail);
        red.polys[i] = q;
    }
    let cmp = red.cmp;
    let mut out: Vec<Terms> = idx.into_iter().map(|i| std::mem::take(&mut red.polys[i])).collect();
    out.sort_by(|a, b| cmp.cmp(&a[0].0, &b[0].0));
    Ok(out)
}
