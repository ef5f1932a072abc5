//! Random exact points of `Gr(K)` for small cones.

use rand::Rng;
use slackspace::cone::FacetBasisChoice;
use slackspace::grassmannian::{grv, plucker, vgr};
use slackspace::AbstractCone;
use slackspace_algebra::{QMatrix, Scalar};

fn random_rows<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Vec<Vec<i64>> {
    (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-6..=6)).collect()).collect()
}

/// Rows `r_1, r_2, r_3` and `r_{i+3} = α_i r_i + β_i c`: the three lateral
/// edges meet at `c`, so every quadrilateral is planar.
fn random_prism<R: Rng>(rng: &mut R) -> QMatrix {
    let base = random_rows(rng, 3, 4);
    let apex: Vec<i64> = (0..4).map(|_| rng.gen_range(-6..=6)).collect();
    let mut rows = base.clone();
    for r in &base {
        let (a, b) = (rng.gen_range(1..=4), rng.gen_range(-4..=4));
        rows.push(r.iter().zip(&apex).map(|(x, c)| a * x + b * c).collect());
    }
    QMatrix::from_ints(&rows)
}

/// True iff `x` lies in `Gr(K)`: coordinates vanish exactly inside facets.
pub fn in_gr(x: &QMatrix, cone: &AbstractCone, bases: &FacetBasisChoice) -> bool {
    let Ok(p) = plucker(x) else { return false };
    let ext = cone.facet_extensions(bases);
    ext.contained.iter().all(|s| p.get(s).is_zero()) && ext.extensions.iter().all(|s| !p.get(s).is_zero())
}

/// A random point of `Gr(K)` given by a v×(d+1) matrix. Prisms use the
/// apex construction, other cones a generic integer matrix.
pub fn random_point<R: Rng>(rng: &mut R, cone: &AbstractCone, bases: &FacetBasisChoice) -> QMatrix {
    let prism = cone.v == 6 && cone.d == 3;
    loop {
        let x = if prism { random_prism(rng) } else { QMatrix::from_ints(&random_rows(rng, cone.v, cone.d + 1)) };
        if in_gr(&x, cone, bases) {
            return x;
        }
    }
}

/// Each column of `a` is a nonzero multiple of the same column of `b`.
pub fn columns_proportional(a: &QMatrix, b: &QMatrix) -> bool {
    (0..a.cols()).all(|j| {
        let (ca, cb) = (a.column(j), b.column(j));
        let Some(k) = ca.iter().position(|x| !x.is_zero()) else { return false };
        if cb[k].is_zero() {
            return false;
        }
        let ratio = cb[k].clone() / ca[k].clone();
        ca.iter().zip(&cb).all(|(x, y)| x.clone() * ratio.clone() == *y)
    })
}

/// `VGr∘GrV` is the identity on Plücker vectors, and `GrV∘VGr` is the
/// identity up to column scaling on slack matrices with rescaled columns.
pub fn inverse_lemma_holds(
    x: &QMatrix,
    cone: &AbstractCone,
    bases: &FacetBasisChoice,
    scales: &[i64],
) -> Result<(), String> {
    let p = plucker(x).map_err(|e| e.to_string())?;
    let s = grv(&p, cone, bases).map_err(|e| e.to_string())?;
    if !vgr(&s, cone.d + 1).map_err(|e| e.to_string())?.projectively_equal(&p) {
        return Err("VGr(GrV(p)) differs from p".into());
    }
    let mut scaled = s.clone();
    for (j, &c) in scales.iter().enumerate().take(s.cols()) {
        scaled.scale_column(j, &Scalar::from_int(c));
    }
    let back = vgr(&scaled, cone.d + 1).map_err(|e| e.to_string())?;
    if !back.projectively_equal(&p) {
        return Err("VGr of a rescaled slack matrix differs from p".into());
    }
    let again = grv(&back, cone, bases).map_err(|e| e.to_string())?;
    if !columns_proportional(&scaled, &again) {
        return Err("GrV(VGr(S)) is not a column scaling of S".into());
    }
    Ok(())
}
