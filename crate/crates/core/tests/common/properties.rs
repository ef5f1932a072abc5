//! Property checks shared by the proptest suite and the acceptance run.

use std::sync::Arc;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use slackspace::gale::dual_plucker;
use slackspace::grassmannian::{plucker, plucker_relations};
use slackspace_algebra::{Ideal, Monomial, MonomialOrder, PolyMatrix, Polynomial, QMatrix, ResourceLimits, Ring, Scalar};

pub type Terms = Vec<(i64, [u16; 3])>;

pub fn ring3() -> Arc<Ring> {
    Ring::new(["a", "b", "c"]).unwrap()
}

pub fn build(ring: &Arc<Ring>, terms: &Terms) -> Polynomial {
    Polynomial::from_terms(
        ring,
        terms.iter().map(|(c, e)| (Monomial::from_exponents(e.to_vec()), Scalar::from_int(*c))),
    )
}

pub fn terms_strategy(max_exp: u16) -> impl Strategy<Value = Terms> {
    prop::collection::vec((-3i64..=3, [0..=max_exp, 0..=max_exp, 0..=max_exp]), 1..4)
}

pub fn int_matrix(rows: usize, cols: usize, bound: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-bound..=bound, cols), rows)
}

/// Fraction-free elimination, independent of the library's determinant.
pub fn bareiss(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else { return 0 };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    if n == 0 {
        1
    } else {
        sign * a[n - 1][n - 1]
    }
}

fn check(cond: bool, what: impl Into<String>) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(what.into()))
    }
}

fn qmatrix(m: &[Vec<i64>]) -> QMatrix {
    QMatrix::from_ints(m)
}

fn scalar_of(p: &Polynomial) -> Scalar {
    p.constant_value().unwrap_or_else(Scalar::zero)
}

/// Symbolic and numeric determinants agree with Bareiss; a symbolic
/// determinant commutes with evaluation.
pub fn det_matches_bareiss(m: &[Vec<i64>], point: &[i64]) -> Result<(), TestCaseError> {
    let oracle = Scalar::from_int(bareiss(m) as i64);
    let ring = ring3();
    let numeric = PolyMatrix::from_numeric(&ring, &qmatrix(m));
    check(scalar_of(&numeric.det().unwrap()) == oracle, "polynomial det of a constant matrix")?;
    check(qmatrix(m).det().unwrap() == oracle, "rational det")?;
    // Shift entries by variables, evaluate, compare.
    let n = m.len();
    let mut sym = numeric.clone();
    for i in 0..n {
        for j in 0..n {
            let shift = Polynomial::var(&ring, (i + j) % 3);
            sym.set(i, j, numeric.get(i, j) + &shift);
        }
    }
    let pt: Vec<Scalar> = point.iter().map(|&x| Scalar::from_int(x)).collect();
    let evaluated: Vec<Vec<i64>> =
        (0..n).map(|i| (0..n).map(|j| m[i][j] + point[(i + j) % 3]).collect()).collect();
    check(
        sym.det().unwrap().eval(&pt) == Scalar::from_int(bareiss(&evaluated) as i64),
        "det does not commute with evaluation",
    )
}

fn s_polynomial(f: &Polynomial, g: &Polynomial, order: &MonomialOrder) -> Polynomial {
    let (mf, cf) = f.leading_term(order).unwrap().clone();
    let (mg, cg) = g.leading_term(order).unwrap().clone();
    let l = mf.lcm(&mg);
    f.mul_monomial(&mf.quotient_of(&l), &cf.recip()) - g.mul_monomial(&mg.quotient_of(&l), &cg.recip())
}

/// Buchberger's criterion on the computed basis, and generator membership.
pub fn s_polynomials_reduce_to_zero(gens: &[Terms]) -> Result<(), TestCaseError> {
    let ring = ring3();
    let gens: Vec<Polynomial> = gens.iter().map(|t| build(&ring, t)).filter(|p| !p.is_zero()).collect();
    let order = MonomialOrder::DegRevLex;
    let gb = Ideal::new(&ring, gens.clone()).groebner(&order, &ResourceLimits::default()).unwrap();
    let basis = gb.elements();
    for (i, f) in basis.iter().enumerate() {
        for g in &basis[i + 1..] {
            check(gb.reduce(&s_polynomial(f, g, &order)).is_zero(), format!("S({f}, {g}) does not reduce to 0"))?;
        }
    }
    for g in &gens {
        check(gb.contains(g), format!("generator {g} not in its basis"))?;
    }
    Ok(())
}

/// `I ⊆ I:f^∞` and saturating twice changes nothing.
pub fn saturation_idempotent(gens: &[Terms], f: &Terms) -> Result<(), TestCaseError> {
    let ring = ring3();
    let lim = ResourceLimits::default();
    let i = Ideal::new(&ring, gens.iter().map(|t| build(&ring, t)));
    let f = build(&ring, f);
    if f.is_zero() {
        return Ok(());
    }
    let once = i.saturate(&f, &lim).unwrap();
    let twice = once.saturate(&f, &lim).unwrap();
    check(once.contains_ideal(&i, &lim).unwrap(), "I not inside its saturation")?;
    check(once.equals(&twice, &lim).unwrap(), "saturation is not idempotent")
}

/// `pl(XA) = det(A)·pl(X)`.
pub fn plucker_gl_multilinear(x: &[Vec<i64>], a: &[Vec<i64>]) -> Result<(), TestCaseError> {
    let xm = qmatrix(x);
    let am = qmatrix(a);
    if xm.rank() < xm.cols() {
        return Ok(());
    }
    let det = am.det().unwrap();
    let xa = xm.mul(&am).unwrap();
    if det.is_zero() {
        return check(plucker(&xa).is_err(), "pl(XA) accepted a singular A");
    }
    let lhs = plucker(&xa).unwrap();
    let rhs = plucker(&xm).unwrap();
    for (l, r) in lhs.coords().iter().zip(rhs.coords()) {
        let mut scaled = r.clone();
        scaled *= &det;
        check(*l == scaled, "pl(XA) differs from det(A) pl(X)")?;
    }
    Ok(())
}

/// Every Plücker relation vanishes on the maximal minors of `x`.
pub fn plucker_relations_vanish(x: &[Vec<i64>]) -> Result<(), TestCaseError> {
    let xm = qmatrix(x);
    let p = plucker(&xm).unwrap();
    for r in plucker_relations(xm.cols(), xm.rows()) {
        check(r.eval(p.coords()).is_zero(), format!("{r} does not vanish"))?;
    }
    Ok(())
}

/// The dual of the dual is the vector itself, and the dual of `pl(X)` is the
/// vector of the orthogonal complement.
pub fn dual_involution(x: &[Vec<i64>]) -> Result<(), TestCaseError> {
    let xm = qmatrix(x);
    if xm.rank() < xm.cols() {
        return Ok(());
    }
    let p = plucker(&xm).unwrap();
    let q = dual_plucker(&p);
    check(dual_plucker(&q).projectively_equal(&p), "dual is not an involution")?;
    let kernel = xm.left_kernel();
    let rows: Vec<Vec<Scalar>> = (0..xm.rows()).map(|i| kernel.iter().map(|v| v[i].clone()).collect()).collect();
    let b = QMatrix::from_rows(rows).unwrap();
    check(plucker(&b).unwrap().projectively_equal(&q), "dual differs from the complement")
}

fn fail<T: std::fmt::Debug>(name: &str, e: proptest::test_runner::TestError<T>) -> String {
    format!("{name}: {e}")
}

/// Runs every property with `cases` cases each; returns the first failure.
pub fn run_all(cases: u32) -> Result<(), String> {
    let runner = || TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner()
        .run(&(1usize..=5).prop_flat_map(|n| (int_matrix(n, n, 9), prop::collection::vec(-5i64..=5, 3))), |(m, p)| {
            det_matches_bareiss(&m, &p)
        })
        .map_err(|e| fail("determinant", e))?;
    runner()
        .run(&prop::collection::vec(terms_strategy(2), 1..4), |g| s_polynomials_reduce_to_zero(&g))
        .map_err(|e| fail("S-polynomials", e))?;
    runner()
        .run(&(prop::collection::vec(terms_strategy(2), 1..3), terms_strategy(1)), |(g, f)| {
            saturation_idempotent(&g, &f)
        })
        .map_err(|e| fail("saturation", e))?;
    runner()
        .run(&(int_matrix(5, 3, 4), int_matrix(3, 3, 3)), |(x, a)| plucker_gl_multilinear(&x, &a))
        .map_err(|e| fail("GL action", e))?;
    runner()
        .run(&(4usize..=6, 2usize..=3).prop_flat_map(|(v, k)| int_matrix(v, k, 5)), |x| plucker_relations_vanish(&x))
        .map_err(|e| fail("Plücker relations", e))?;
    runner()
        .run(&(4usize..=6, 1usize..=3).prop_flat_map(|(v, k)| int_matrix(v, k, 5)), |x| dual_involution(&x))
        .map_err(|e| fail("dual", e))?;
    Ok(())
}
