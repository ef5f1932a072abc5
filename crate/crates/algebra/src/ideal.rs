use std::sync::{Arc, Mutex};

use crate::error::{AlgebraError, Result};
use crate::groebner::{buchberger, Abandon, Reducers, RunOptions, Terms};
use crate::limits::ResourceLimits;
use crate::monomial::Monomial;
use crate::order::{Comparator, MonomialOrder};
use crate::poly::{format_terms, Polynomial};
use crate::qmatrix::QMatrix;
use crate::ring::{same_ring, Ring};
use crate::scalar::Scalar;

/// A reduced Groebner basis under a fixed order.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: Arc<Ring>,
    order: MonomialOrder,
    /// Monic elements sorted by the order, ascending by leading monomial.
    internal: Vec<Terms>,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.internal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.internal.is_empty()
    }

    pub fn elements(&self) -> Vec<Polynomial> {
        self.internal.iter().map(|t| Polynomial::from_distinct(&self.ring, t.clone())).collect()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.internal.iter().map(|t| t[0].0.clone()).collect()
    }

    /// True iff the basis is `{1}`.
    pub fn is_unit(&self) -> bool {
        self.internal.iter().any(|t| t[0].0.is_one())
    }

    /// Unique normal form of `p`.
    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        assert!(same_ring(&self.ring, p.ring()), "reducing across rings");
        let cmp = Comparator::new(&self.order, self.ring.len());
        let red = Reducers::from_basis(&cmp, self.internal.clone());
        let nf = red.reduce(p.sorted_terms(&self.order), None, None).expect("no deadline");
        Polynomial::from_distinct(&self.ring, nf)
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.reduce(p).is_zero()
    }

    /// Elements with their terms printed in this basis' order.
    pub fn to_strings(&self) -> Vec<String> {
        self.internal.iter().map(|t| format_terms(&self.ring, t)).collect()
    }

    pub fn into_ideal(self) -> Ideal {
        let gens = self.elements();
        let ideal = Ideal::new(&self.ring, gens);
        *ideal.cache.lock().unwrap() = Some(self);
        ideal
    }
}

/// An ideal given by generators, caching its most recent Groebner basis.
#[derive(Clone)]
pub struct Ideal {
    ring: Arc<Ring>,
    gens: Vec<Polynomial>,
    cache: Arc<Mutex<Option<GroebnerBasis>>>,
}

impl std::fmt::Debug for Ideal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.gens.iter().map(ToString::to_string)).finish()
    }
}

fn abandoned(ring: &Arc<Ring>, a: Abandon) -> AlgebraError {
    AlgebraError::Abandoned { kind: a.kind, partial: a.partial.iter().map(|t| format_terms(ring, t)).collect() }
}

impl Ideal {
    /// The ideal generated by `gens`; zero generators are dropped.
    pub fn new(ring: &Arc<Ring>, gens: impl IntoIterator<Item = Polynomial>) -> Self {
        let gens: Vec<Polynomial> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        for g in &gens {
            assert!(same_ring(ring, g.ring()), "generator from another ring");
        }
        Ideal { ring: ring.clone(), gens, cache: Arc::new(Mutex::new(None)) }
    }

    pub fn zero(ring: &Arc<Ring>) -> Self {
        Self::new(ring, [])
    }

    pub fn unit(ring: &Arc<Ring>) -> Self {
        Self::new(ring, [Polynomial::one(ring)])
    }

    pub fn parse(ring: &Arc<Ring>, texts: &[&str]) -> Result<Self> {
        let gens = texts.iter().map(|t| Polynomial::parse(ring, t)).collect::<Result<Vec<_>>>()?;
        Ok(Self::new(ring, gens))
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().all(Polynomial::is_homogeneous)
    }

    /// Reduced Groebner basis under `order`.
    pub fn groebner(&self, order: &MonomialOrder, limits: &ResourceLimits) -> Result<GroebnerBasis> {
        if let Some(gb) = self.cache.lock().unwrap().as_ref() {
            if gb.order == *order {
                return Ok(gb.clone());
            }
        }
        let gb = self.compute_groebner(order, limits, RunOptions::default())?;
        *self.cache.lock().unwrap() = Some(gb.clone());
        Ok(gb)
    }

    fn compute_groebner(&self, order: &MonomialOrder, limits: &ResourceLimits, opts: RunOptions) -> Result<GroebnerBasis> {
        let cmp = Comparator::new(order, self.ring.len());
        let gens: Vec<Terms> = self.gens.iter().map(|g| g.sorted_terms(order)).collect();
        let internal = buchberger(&cmp, gens, limits, opts).map_err(|a| abandoned(&self.ring, a))?;
        Ok(GroebnerBasis { ring: self.ring.clone(), order: order.clone(), internal })
    }

    /// Reduced degrevlex basis.
    pub fn basis(&self, limits: &ResourceLimits) -> Result<GroebnerBasis> {
        if let Some(gb) = self.cache.lock().unwrap().as_ref() {
            return Ok(gb.clone());
        }
        self.groebner(&MonomialOrder::DegRevLex, limits)
    }

    pub fn reduce(&self, p: &Polynomial, limits: &ResourceLimits) -> Result<Polynomial> {
        Ok(self.basis(limits)?.reduce(p))
    }

    pub fn contains(&self, p: &Polynomial, limits: &ResourceLimits) -> Result<bool> {
        Ok(self.reduce(p, limits)?.is_zero())
    }

    pub fn contains_ideal(&self, other: &Ideal, limits: &ResourceLimits) -> Result<bool> {
        let gb = self.basis(limits)?;
        Ok(other.gens.iter().all(|g| gb.contains(&g.embed(&self.ring).expect("same ring"))))
    }

    /// Mutual containment.
    pub fn equals(&self, other: &Ideal, limits: &ResourceLimits) -> Result<bool> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(AlgebraError::RingMismatch("ideals over different rings".into()));
        }
        Ok(self.contains_ideal(other, limits)? && other.contains_ideal(self, limits)?)
    }

    pub fn is_trivial(&self, limits: &ResourceLimits) -> Result<bool> {
        if self.gens.iter().any(|g| g.is_constant()) {
            return Ok(true);
        }
        Ok(self.basis(limits)?.is_unit())
    }

    /// `I : f^∞`.
    ///
    /// A monomial `f` is handled variable by variable (see
    /// [`Ideal::saturate_variable`]); any other `f` goes through the
    /// `t*f - 1` elimination.
    pub fn saturate(&self, f: &Polynomial, limits: &ResourceLimits) -> Result<Ideal> {
        if f.is_zero() {
            return Err(AlgebraError::Shape("saturation by zero".into()));
        }
        if f.is_constant() || self.gens.is_empty() {
            return Ok(self.clone());
        }
        if f.is_monomial() {
            return self.saturate_variables(&f.variables(), limits);
        }
        self.saturate_rabinowitsch(f, limits)
    }

    /// `I : f^∞` via a fresh variable `t`, the generator `t*f - 1`, and
    /// elimination of `t`.
    pub fn saturate_rabinowitsch(&self, f: &Polynomial, limits: &ResourceLimits) -> Result<Ideal> {
        let t_name = self.ring.fresh_name("t");
        let big = self.ring.extended([t_name.as_str()])?;
        let t = Polynomial::var(&big, self.ring.len());
        let mut gens: Vec<Polynomial> = self.gens.iter().map(|g| g.embed(&big).expect("superset")).collect();
        gens.push(&(&t * &f.embed(&big)?) - &Polynomial::one(&big));
        let gb = Ideal::new(&big, gens).compute_groebner(
            &MonomialOrder::Elimination(vec![self.ring.len()]),
            limits,
            RunOptions::default(),
        )?;
        let kept = gb
            .elements()
            .into_iter()
            .filter(|p| p.degree_in(self.ring.len()) == 0)
            .map(|p| p.embed(&self.ring).expect("t-free"))
            .collect::<Vec<_>>();
        Ok(Ideal::new(&self.ring, kept))
    }

    /// `I : (x_1 ⋯ x_k)^∞` for the given variables.
    ///
    /// For homogeneous `I` each variable is handled by a degrevlex basis with
    /// that variable last, dividing out its powers. Inhomogeneous input is
    /// homogenized with a fresh variable `h`, saturated by `h` and the
    /// variables, then dehomogenized.
    pub fn saturate_variables(&self, vars: &[usize], limits: &ResourceLimits) -> Result<Ideal> {
        if self.gens.is_empty() || vars.is_empty() {
            return Ok(self.clone());
        }
        if self.is_homogeneous() {
            let mut cur = self.clone();
            for &v in vars {
                cur = cur.saturate_homogeneous_var(v, limits)?;
                if cur.gens.iter().any(Polynomial::is_constant) {
                    return Ok(Ideal::unit(&self.ring));
                }
            }
            return Ok(cur);
        }
        let h_name = self.ring.fresh_name("h");
        let big = self.ring.extended([h_name.as_str()])?;
        let h = self.ring.len();
        let gens = self.gens.iter().map(|g| homogenize(g, &big, h)).collect::<Vec<_>>();
        let mut cur = Ideal::new(&big, gens).saturate_homogeneous_var(h, limits)?;
        for &v in vars {
            cur = cur.saturate_homogeneous_var(v, limits)?;
        }
        let one = Scalar::one();
        let gens = cur
            .gens
            .iter()
            .map(|g| g.specialize(&[(h, one.clone())]).embed(&self.ring).expect("h removed"))
            .collect::<Vec<_>>();
        let out = Ideal::new(&self.ring, gens);
        if out.gens.iter().any(Polynomial::is_constant) {
            return Ok(Ideal::unit(&self.ring));
        }
        Ok(out)
    }

    fn saturate_homogeneous_var(&self, v: usize, limits: &ResourceLimits) -> Result<Ideal> {
        // Reorder the ring so that `v` is the last (smallest) variable.
        let n = self.ring.len();
        let mut names: Vec<String> = (0..n).filter(|&i| i != v).map(|i| self.ring.name(i).to_string()).collect();
        names.push(self.ring.name(v).to_string());
        let perm_ring = Ring::new(names)?;
        let gens = self.gens.iter().map(|g| g.embed(&perm_ring).expect("permuted")).collect::<Vec<_>>();
        let gb = Ideal::new(&perm_ring, gens).compute_groebner(&MonomialOrder::DegRevLex, limits, RunOptions::default())?;
        let last = n - 1;
        let out = gb
            .elements()
            .into_iter()
            .map(|p| {
                let k = p.terms().iter().map(|(m, _)| m.exponent(last)).min().unwrap_or(0);
                let p = if k > 0 { p.div_monomial(&Monomial::var(n, last, k)) } else { p };
                p.embed(&self.ring).expect("same names")
            })
            .collect::<Vec<_>>();
        Ok(Ideal::new(&self.ring, out))
    }

    /// `I ∩ k[remaining variables]`, still expressed in this ring.
    pub fn eliminate(&self, vars: &[usize], limits: &ResourceLimits) -> Result<Ideal> {
        if vars.is_empty() {
            return Ok(self.clone());
        }
        let gb = self.compute_groebner(&MonomialOrder::Elimination(vars.to_vec()), limits, RunOptions::default())?;
        let kept = gb.elements().into_iter().filter(|p| vars.iter().all(|&v| p.degree_in(v) == 0)).collect::<Vec<_>>();
        Ok(Ideal::new(&self.ring, kept))
    }

    /// Restricts generators to a ring containing all variables they use.
    pub fn embed(&self, target: &Arc<Ring>) -> Result<Ideal> {
        let gens = self.gens.iter().map(|g| g.embed(target)).collect::<Result<Vec<_>>>()?;
        Ok(Ideal::new(target, gens))
    }

    /// Krull dimension of `R/I` where `R` is this ideal's ring.
    pub fn krull_dimension(&self, limits: &ResourceLimits) -> Result<usize> {
        let n = self.ring.len();
        if self.gens.is_empty() {
            return Ok(n);
        }
        let gb = self.basis(limits)?;
        if gb.is_unit() {
            return Err(AlgebraError::DimensionUndefined);
        }
        let supports: Vec<u128> = gb.leading_monomials().iter().map(|m| support_mask(m)).collect();
        Ok(max_independent_set(n, &supports))
    }

    /// Krull dimension measured in an explicitly declared ambient ring that
    /// contains this ring's variables (extra variables are free).
    pub fn krull_dimension_in(&self, ambient: &Arc<Ring>, limits: &ResourceLimits) -> Result<usize> {
        for name in self.ring.names() {
            if ambient.var(name).is_none() {
                return Err(AlgebraError::RingMismatch(format!("ambient ring lacks {name}")));
            }
        }
        Ok(self.krull_dimension(limits)? + ambient.len() - self.ring.len())
    }

    /// A minimal homogeneous generating set, built degree by degree from the
    /// reduced basis. Requires homogeneous generators.
    pub fn minimal_generators(&self, limits: &ResourceLimits) -> Result<Vec<Polynomial>> {
        if !self.is_homogeneous() {
            return Err(AlgebraError::Shape("minimal generators need a homogeneous ideal".into()));
        }
        let gb = self.basis(limits)?;
        if gb.is_unit() {
            return Ok(vec![Polynomial::one(&self.ring)]);
        }
        let mut cands = gb.elements();
        cands.sort_by_key(|p| p.total_degree());
        let mut kept: Vec<Polynomial> = Vec::new();
        let mut idx = 0;
        while idx < cands.len() {
            let deg = cands[idx].total_degree();
            let end = idx + cands[idx..].iter().take_while(|p| p.total_degree() == deg).count();
            let lower = if kept.is_empty() {
                None
            } else {
                let opts = RunOptions { degree_cap: Some(deg) };
                Some(Ideal::new(&self.ring, kept.clone()).compute_groebner(&MonomialOrder::DegRevLex, limits, opts)?)
            };
            let nfs: Vec<Polynomial> =
                cands[idx..end].iter().map(|p| lower.as_ref().map_or_else(|| p.clone(), |gb| gb.reduce(p))).collect();
            for k in independent_subset(&nfs) {
                kept.push(cands[idx + k].clone());
            }
            idx = end;
        }
        Ok(kept)
    }
}

/// Indices of a maximal linearly independent subset, greedily in order.
fn independent_subset(polys: &[Polynomial]) -> Vec<usize> {
    let mut monos: Vec<Monomial> = Vec::new();
    for p in polys {
        for (m, _) in p.terms() {
            if !monos.contains(m) {
                monos.push(m.clone());
            }
        }
    }
    let mut chosen = Vec::new();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for (k, p) in polys.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let mut row = vec![Scalar::zero(); monos.len()];
        for (m, c) in p.terms() {
            let j = monos.iter().position(|x| x == m).unwrap();
            row[j] = c.clone();
        }
        rows.push(row);
        let rank = QMatrix::from_rows(rows.clone()).expect("rectangular").rank();
        if rank == rows.len() {
            chosen.push(k);
        } else {
            rows.pop();
        }
    }
    chosen
}

fn support_mask(m: &Monomial) -> u128 {
    let mut mask = 0u128;
    for (i, _) in m.support() {
        assert!(i < 128, "dimension computation supports up to 128 variables");
        mask |= 1 << i;
    }
    mask
}

/// Largest set of variables containing no leading-monomial support.
fn max_independent_set(n: usize, supports: &[u128]) -> usize {
    fn search(i: usize, n: usize, chosen: u128, size: usize, supports: &[u128], best: &mut usize) {
        if size + (n - i) <= *best {
            return;
        }
        if i == n {
            *best = size;
            return;
        }
        let with = chosen | (1 << i);
        if !supports.iter().any(|s| s & !with == 0) {
            search(i + 1, n, with, size + 1, supports, best);
        }
        search(i + 1, n, chosen, size, supports, best);
    }
    let mut best = 0;
    search(0, n, 0, 0, supports, &mut best);
    best
}

/// Homogenizes `p` into `big` using variable `h`.
pub fn homogenize(p: &Polynomial, big: &Arc<Ring>, h: usize) -> Polynomial {
    let d = p.total_degree();
    let q = p.embed(big).expect("superset ring");
    let terms = q
        .terms()
        .iter()
        .map(|(m, c)| {
            let e = (d - m.degree()) as u16;
            (m.mul(&Monomial::var(big.len(), h, e)), c.clone())
        })
        .collect();
    Polynomial::from_distinct(big, terms)
}

/// Free-function form of [`Ideal::equals`].
pub fn ideal_equal(a: &Ideal, b: &Ideal, limits: &ResourceLimits) -> Result<bool> {
    a.equals(b, limits)
}
