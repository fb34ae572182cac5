//! bf-morphisms and generalized isomorphisms over a field: desk-scale
//! points of the compactified general linear group KGl_n(E, F).
//!
//! All twisting line bundles are trivialized, so the scalar of a
//! bf-morphism is an honest field element and only its vanishing is
//! intrinsic. A generalized isomorphism is a chain of n bf-morphisms on
//! each side of a middle isomorphism phi, with declared ranks 0..n−1,
//! subject to the composite-image conditions along each side and the
//! transversality condition across the middle.

use crate::error::{Error, Result};
use crate::exactlin::{
    image_basis, intersect, kernel_basis, rat_int, Matrix, MatrixSystem, Rat, Subspace,
};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// A bf-morphism between two n-dimensional spaces: a scalar mu and a
/// back-and-forth pair f: E' → E, g: E → E' (the twist trivialized) with
/// g·f = f·g = mu·id, plus a declared rank used when mu vanishes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BfMorphism {
    pub n: usize,
    pub mu: Rat,
    /// The arrow E' → E.
    pub f: Matrix,
    /// The arrow E → E' (in the trivialization of the twist).
    pub g: Matrix,
    /// The paper's n − d, where d is the degree of the bubble the morphism
    /// encodes when mu = 0.
    pub bf_rank: usize,
}

impl BfMorphism {
    /// The unit bf-morphism: mu = 1, identity arrows.
    pub fn unit(n: usize, bf_rank: usize) -> Self {
        BfMorphism {
            n,
            mu: rat_int(1),
            f: Matrix::identity(n),
            g: Matrix::identity(n),
            bf_rank,
        }
    }

    pub fn is_unit_scalar(&self) -> bool {
        !self.mu.is_zero()
    }
}

/// Checks every bf-morphism invariant; the violations are returned as
/// data, an empty list meaning the morphism is valid.
pub fn validate_bf(b: &BfMorphism) -> Vec<String> {
    let mut out = Vec::new();
    let n = b.n;
    if b.f.rows() != n || b.f.cols() != n || b.g.rows() != n || b.g.cols() != n {
        out.push(format!(
            "arrow shapes {}x{} and {}x{} do not match rank {}",
            b.f.rows(),
            b.f.cols(),
            b.g.rows(),
            b.g.cols(),
            n
        ));
        return out;
    }
    if b.bf_rank > n {
        out.push(format!("declared rank {} exceeds {}", b.bf_rank, n));
    }
    let mu_id = Matrix::identity(n).scale(&b.mu);
    if b.g.mul(&b.f).unwrap() != mu_id {
        out.push("g·f differs from mu·id".into());
    }
    if b.f.mul(&b.g).unwrap() != mu_id {
        out.push("f·g differs from mu·id".into());
    }
    if !b.mu.is_zero() {
        if !b.f.is_invertible() {
            out.push("mu is nonzero but f is not invertible".into());
        }
    } else {
        if b.f.rank() != b.bf_rank {
            out.push(format!(
                "mu = 0: rank(f) = {} but declared rank is {}",
                b.f.rank(),
                b.bf_rank
            ));
        }
        if image_basis(&b.g) != kernel_basis(&b.f) {
            out.push("mu = 0: image(g) differs from kernel(f)".into());
        }
        if image_basis(&b.f) != kernel_basis(&b.g) {
            out.push("mu = 0: image(f) differs from kernel(g)".into());
        }
    }
    out
}

/// A generalized isomorphism: stage i (1-based) of each side joins the
/// i-th space to the (i−1)-st with declared rank i−1; phi joins E_n to F_n.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneralizedIsomorphism {
    pub n: usize,
    /// Stage i at index i−1; arrows E_i → E_{i−1} (f) and back (g).
    pub e_stages: Vec<BfMorphism>,
    /// Stage i at index i−1; arrows F_i → F_{i−1} (f) and back (g).
    pub f_stages: Vec<BfMorphism>,
    /// The middle isomorphism E_n → F_n.
    pub phi: Matrix,
}

impl GeneralizedIsomorphism {
    /// Scalars mu_0..mu_{n−1} of the E-side stages.
    pub fn mu(&self) -> Vec<Rat> {
        self.e_stages.iter().map(|s| s.mu.clone()).collect()
    }

    /// Scalars lambda_0..lambda_{n−1} of the F-side stages.
    pub fn lambda(&self) -> Vec<Rat> {
        self.f_stages.iter().map(|s| s.mu.clone()).collect()
    }

    /// Indices i with mu_i = 0.
    pub fn mu_zero_indices(&self) -> Vec<usize> {
        self.e_stages
            .iter()
            .enumerate()
            .filter(|(_, s)| s.mu.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn lambda_zero_indices(&self) -> Vec<usize> {
        self.f_stages
            .iter()
            .enumerate()
            .filter(|(_, s)| s.mu.is_zero())
            .map(|(i, _)| i)
            .collect()
    }
}

/// The composite maps E_n → E_0 and F_n → F_0 with their kernels.
#[derive(Clone, Debug)]
pub struct CompositeMaps {
    pub comp_e: Matrix,
    pub comp_f: Matrix,
    pub ker_comp_e: Subspace,
    pub ker_comp_f: Subspace,
}

/// comp_e = a_1·…·a_n and comp_f likewise, kernels echelon-normalized.
pub fn composite_maps(gi: &GeneralizedIsomorphism) -> CompositeMaps {
    let compose = |stages: &[BfMorphism]| -> Matrix {
        let mut acc = Matrix::identity(gi.n);
        for s in stages {
            acc = acc.mul(&s.f).expect("stage shapes agree");
        }
        acc
    };
    let comp_e = compose(&gi.e_stages);
    let comp_f = compose(&gi.f_stages);
    CompositeMaps {
        ker_comp_e: kernel_basis(&comp_e),
        ker_comp_f: kernel_basis(&comp_f),
        comp_e,
        comp_f,
    }
}

/// Checks stage shapes and ranks, the composite-image conditions for
/// consecutive stages of each side, and the transversality condition
/// phi(ker(E_0 ← E_n)) ∩ ker(F_n → F_0) = 0. Violations are data.
pub fn validate_gi(gi: &GeneralizedIsomorphism) -> Vec<String> {
    let n = gi.n;
    let mut out = Vec::new();
    if gi.e_stages.len() != n || gi.f_stages.len() != n {
        out.push(format!(
            "expected {} stages per side, got {} and {}",
            n,
            gi.e_stages.len(),
            gi.f_stages.len()
        ));
        return out;
    }
    if gi.phi.rows() != n || gi.phi.cols() != n || !gi.phi.is_invertible() {
        out.push("phi is not an invertible n×n matrix".into());
        return out;
    }
    for (label, stages) in [("E", &gi.e_stages), ("F", &gi.f_stages)] {
        for (idx, stage) in stages.iter().enumerate() {
            if stage.n != n {
                out.push(format!("{}-stage {} has rank {}", label, idx + 1, stage.n));
                continue;
            }
            if stage.bf_rank != idx {
                out.push(format!(
                    "{}-stage {} declares rank {}, expected {}",
                    label,
                    idx + 1,
                    stage.bf_rank,
                    idx
                ));
            }
            for v in validate_bf(stage) {
                out.push(format!("{}-stage {}: {}", label, idx + 1, v));
            }
        }
    }
    if !out.is_empty() {
        return out;
    }
    // composite-image conditions for consecutive stages of one side:
    // going outward, im(a_i ∘ a_{i+1}) = im(a_i); going inward,
    // im(b_{i+1} ∘ b_i) = im(b_{i+1})
    for (label, stages) in [("E", &gi.e_stages), ("F", &gi.f_stages)] {
        for i in 0..n.saturating_sub(1) {
            let a_lo = &stages[i].f;
            let a_hi = &stages[i + 1].f;
            if image_basis(&a_lo.mul(a_hi).unwrap()) != image_basis(a_lo) {
                out.push(format!(
                    "{}-side stages {} and {}: outward composite image drops",
                    label,
                    i + 1,
                    i + 2
                ));
            }
            let b_lo = &stages[i].g;
            let b_hi = &stages[i + 1].g;
            if image_basis(&b_hi.mul(b_lo).unwrap()) != image_basis(b_hi) {
                out.push(format!(
                    "{}-side stages {} and {}: inward composite image drops",
                    label,
                    i + 1,
                    i + 2
                ));
            }
        }
    }
    let comps = composite_maps(gi);
    let pushed = comps
        .ker_comp_e
        .map(&gi.phi)
        .expect("phi acts on the stage-n fiber");
    let meet = intersect(&pushed, &comps.ker_comp_f).expect("same ambient");
    if !meet.is_zero() {
        out.push(format!(
            "transversality fails: phi(ker compE) meets ker compF in dimension {}",
            meet.dim()
        ));
    }
    out
}

/// A generalized isomorphism is valid when `validate_gi` reports nothing.
pub fn is_valid_gi(gi: &GeneralizedIsomorphism) -> bool {
    validate_gi(gi).is_empty()
}

/// Equivalence of two generalized isomorphisms with the end spaces E_0 and
/// F_0 held fixed: invertible reindexings c_i of E_i and d_i of F_i
/// (c_0 = d_0 = id) must intertwine every f, g and phi. Identical
/// mu/lambda vanishing patterns are necessary and checked first; the
/// feasibility search is seeded, so a miss after the budget means "not
/// shown equivalent".
pub fn gi_equivalent(
    a: &GeneralizedIsomorphism,
    b: &GeneralizedIsomorphism,
    draws: usize,
    seed: u64,
) -> Result<bool> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch(format!(
            "rank {} vs {}",
            a.n, b.n
        )));
    }
    let n = a.n;
    if a.mu_zero_indices() != b.mu_zero_indices()
        || a.lambda_zero_indices() != b.lambda_zero_indices()
    {
        return Ok(false);
    }

    let mut sys = MatrixSystem::new();
    let c: Vec<_> = (0..n).map(|_| sys.unknown(n, n)).collect();
    let d: Vec<_> = (0..n).map(|_| sys.unknown(n, n)).collect();
    for &x in c.iter().chain(&d) {
        sys.require_invertible(x);
    }

    let id = Matrix::identity(n);
    for (stages_a, stages_b, vars) in [(&a.e_stages, &b.e_stages, &c), (&a.f_stages, &b.f_stages, &d)] {
        for i in 0..n {
            let (fa, ga) = (&stages_a[i].f, &stages_a[i].g);
            let (fb, gb) = (&stages_b[i].f, &stages_b[i].g);
            if i == 0 {
                // c_0 = id: f_1^a = f_1^b·c_1 and c_1·g_1^a = g_1^b
                sys.equation(
                    vec![(fb.neg(), vars[0], id.clone())],
                    fa.clone(),
                )?;
                sys.equation(
                    vec![(id.clone(), vars[0], ga.clone())],
                    gb.neg(),
                )?;
            } else {
                // c_{i−1}·f_i^a = f_i^b·c_i and c_i·g_i^a = g_i^b·c_{i−1}
                sys.equation(
                    vec![
                        (id.clone(), vars[i - 1], fa.clone()),
                        (fb.neg(), vars[i], id.clone()),
                    ],
                    Matrix::zero(n, n),
                )?;
                sys.equation(
                    vec![
                        (id.clone(), vars[i], ga.clone()),
                        (gb.neg(), vars[i - 1], id.clone()),
                    ],
                    Matrix::zero(n, n),
                )?;
            }
        }
    }
    // d_n·phi_a = phi_b·c_n
    sys.equation(
        vec![
            (id.clone(), d[n - 1], a.phi.clone()),
            (b.phi.neg(), c[n - 1], id),
        ],
        Matrix::zero(n, n),
    )?;

    Ok(sys.solve(draws, seed)?.is_some())
}

/// The Grassmannian quotient of a valid generalized isomorphism: the
/// cokernel of v ↦ (compE(v), compF(phi v)) from E_n to E_0 ⊕ F_0,
/// presented by the canonical quotient matrix q with q·j = 0. The map is
/// injective (transversality kills its kernel), so dim Q = n.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GrassmannianPoint {
    pub dim_q: usize,
    /// n × 2n matrix whose rows are the echelon basis of the annihilator
    /// of the image of j.
    pub q: Matrix,
}

pub fn grassmannian_point(gi: &GeneralizedIsomorphism) -> Result<GrassmannianPoint> {
    let violations = validate_gi(gi);
    if !violations.is_empty() {
        return Err(Error::Invalid(violations.join("; ")));
    }
    let comps = composite_maps(gi);
    let j = Matrix::vstack(&[&comps.comp_e, &comps.comp_f.mul(&gi.phi)?])?;
    let dim_q = 2 * gi.n - j.rank();
    let q = kernel_basis(&j.transpose()).basis().transpose();
    Ok(GrassmannianPoint { dim_q, q })
}

#[derive(Serialize, Deserialize)]
struct GiDto {
    v: u32,
    n: usize,
    mu: Vec<String>,
    lambda: Vec<String>,
    e_f: Vec<Matrix>,
    e_g: Vec<Matrix>,
    f_f: Vec<Matrix>,
    f_g: Vec<Matrix>,
    phi: Matrix,
}

impl Serialize for GeneralizedIsomorphism {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use crate::exactlin::rat_to_string;
        GiDto {
            v: 1,
            n: self.n,
            mu: self.mu().iter().map(rat_to_string).collect(),
            lambda: self.lambda().iter().map(rat_to_string).collect(),
            e_f: self.e_stages.iter().map(|st| st.f.clone()).collect(),
            e_g: self.e_stages.iter().map(|st| st.g.clone()).collect(),
            f_f: self.f_stages.iter().map(|st| st.f.clone()).collect(),
            f_g: self.f_stages.iter().map(|st| st.g.clone()).collect(),
            phi: self.phi.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GeneralizedIsomorphism {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use crate::exactlin::rat_from_string;
        use serde::de::Error as _;
        let dto = GiDto::deserialize(d)?;
        if dto.v != 1 {
            return Err(D::Error::custom(format!("unsupported schema version {}", dto.v)));
        }
        let n = dto.n;
        if dto.mu.len() != n
            || dto.lambda.len() != n
            || dto.e_f.len() != n
            || dto.e_g.len() != n
            || dto.f_f.len() != n
            || dto.f_g.len() != n
        {
            return Err(D::Error::custom("stage lists must have length n"));
        }
        let parse = |ss: &[String]| -> std::result::Result<Vec<Rat>, D::Error> {
            ss.iter()
                .map(|s| rat_from_string(s).map_err(|e| D::Error::custom(e.to_string())))
                .collect()
        };
        let mu = parse(&dto.mu)?;
        let lambda = parse(&dto.lambda)?;
        let stage = |i: usize, mu: &[Rat], fs: &[Matrix], gs: &[Matrix]| BfMorphism {
            n,
            mu: mu[i].clone(),
            f: fs[i].clone(),
            g: gs[i].clone(),
            bf_rank: i,
        };
        Ok(GeneralizedIsomorphism {
            n,
            e_stages: (0..n).map(|i| stage(i, &mu, &dto.e_f, &dto.e_g)).collect(),
            f_stages: (0..n)
                .map(|i| stage(i, &lambda, &dto.f_f, &dto.f_g))
                .collect(),
            phi: dto.phi,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The all-units generalized isomorphism with phi = id.
    pub(super) fn all_units(n: usize) -> GeneralizedIsomorphism {
        GeneralizedIsomorphism {
            n,
            e_stages: (0..n).map(|i| BfMorphism::unit(n, i)).collect(),
            f_stages: (0..n).map(|i| BfMorphism::unit(n, i)).collect(),
            phi: Matrix::identity(n),
        }
    }

    /// Rank-1 gi with prescribed scalar pattern; a zero scalar gets the
    /// valid (f, g) = (0, 1) pair.
    pub(super) fn rank_one(mu0: i64, lambda0: i64) -> GeneralizedIsomorphism {
        let stage = |s: i64| {
            if s == 0 {
                BfMorphism {
                    n: 1,
                    mu: rat_int(0),
                    f: Matrix::zero(1, 1),
                    g: Matrix::identity(1),
                    bf_rank: 0,
                }
            } else {
                BfMorphism::unit(1, 0)
            }
        };
        GeneralizedIsomorphism {
            n: 1,
            e_stages: vec![stage(mu0)],
            f_stages: vec![stage(lambda0)],
            phi: Matrix::identity(1),
        }
    }

    #[test]
    fn validate_bf_examples() {
        assert!(validate_bf(&BfMorphism::unit(2, 0)).is_empty());
        // mu = 0 with matching kernel/image data
        let nil = BfMorphism {
            n: 2,
            mu: rat_int(0),
            f: Matrix::from_i64(&[&[0, 0], &[1, 0]]),
            g: Matrix::from_i64(&[&[0, 0], &[1, 0]]),
            bf_rank: 1,
        };
        assert!(validate_bf(&nil).is_empty());
        // mu = 0 with invertible f cannot satisfy the exchange conditions
        let bad = BfMorphism {
            n: 2,
            mu: rat_int(0),
            f: Matrix::identity(2),
            g: Matrix::zero(2, 2),
            bf_rank: 0,
        };
        assert!(!validate_bf(&bad).is_empty());
    }

    #[test]
    fn validate_gi_rank_one_patterns() {
        assert!(is_valid_gi(&rank_one(1, 1)));
        assert!(is_valid_gi(&rank_one(0, 1)));
        assert!(is_valid_gi(&rank_one(1, 0)));
        let both_zero = validate_gi(&rank_one(0, 0));
        assert!(both_zero.iter().any(|v| v.contains("transversality")));
    }

    #[test]
    fn validate_gi_all_units() {
        assert!(is_valid_gi(&all_units(3)));
    }

    #[test]
    fn composite_map_examples() {
        let gi = all_units(2);
        let comps = composite_maps(&gi);
        assert_eq!(comps.comp_e, Matrix::identity(2));
        assert!(comps.ker_comp_e.is_zero());

        let gi = rank_one(0, 1);
        let comps = composite_maps(&gi);
        assert!(comps.comp_e.is_zero());
        assert_eq!(comps.ker_comp_e, Subspace::full(1));
    }

    #[test]
    fn gi_equivalence_reflexive_and_conjugation_stable() {
        let gi = all_units(2);
        assert!(gi_equivalent(&gi, &gi, 32, 1).unwrap());

        // conjugate the internal space E_1 by an invertible c_1 and rewrite
        // the adjacent stage maps accordingly
        let c1 = Matrix::from_i64(&[&[1, 1], &[0, 1]]);
        let mut other = gi.clone();
        other.e_stages[0].f = gi.e_stages[0].f.mul(&c1.inverse().unwrap()).unwrap();
        other.e_stages[0].g = c1.mul(&gi.e_stages[0].g).unwrap();
        other.e_stages[1].f = c1.mul(&gi.e_stages[1].f).unwrap();
        other.e_stages[1].g = gi.e_stages[1].g.mul(&c1.inverse().unwrap()).unwrap();
        assert!(is_valid_gi(&other));
        assert!(gi_equivalent(&gi, &other, 64, 2).unwrap());

        // different vanishing patterns are never equivalent
        assert!(!gi_equivalent(&rank_one(0, 1), &rank_one(1, 0), 16, 1).unwrap());
    }

    #[test]
    fn grassmannian_examples() {
        // all units, phi = 1: the graph of the identity, q = [1, −1]
        let p = grassmannian_point(&rank_one(1, 1)).unwrap();
        assert_eq!(p.dim_q, 1);
        assert_eq!(p.q, Matrix::from_i64(&[&[1, -1]]));

        // mu_0 = 0: the map v ↦ (0, v), Q is the E_0 factor
        let p = grassmannian_point(&rank_one(0, 1)).unwrap();
        assert_eq!(p.dim_q, 1);
        assert_eq!(p.q, Matrix::from_i64(&[&[1, 0]]));

        // anti-diagonal graph quotient in higher rank
        let p = grassmannian_point(&all_units(3)).unwrap();
        assert_eq!(p.dim_q, 3);
        let expected = Matrix::hstack(&[&Matrix::identity(3), &Matrix::identity(3).neg()]).unwrap();
        assert_eq!(p.q, expected);

        // invalid input is an error, not a point
        assert!(grassmannian_point(&rank_one(0, 0)).is_err());
    }

    #[test]
    fn gi_equivalence_implies_equal_grassmannian_point() {
        let gi = all_units(2);
        let c1 = Matrix::from_i64(&[&[2, 1], &[1, 1]]);
        let mut other = gi.clone();
        other.e_stages[0].f = gi.e_stages[0].f.mul(&c1.inverse().unwrap()).unwrap();
        other.e_stages[0].g = c1.mul(&gi.e_stages[0].g).unwrap();
        other.e_stages[1].f = c1.mul(&gi.e_stages[1].f).unwrap();
        other.e_stages[1].g = gi.e_stages[1].g.mul(&c1.inverse().unwrap()).unwrap();
        assert!(gi_equivalent(&gi, &other, 64, 3).unwrap());
        assert_eq!(
            grassmannian_point(&gi).unwrap(),
            grassmannian_point(&other).unwrap()
        );
    }

    #[test]
    fn scaling_preserves_validity() {
        let mut gi = all_units(3);
        let t = crate::exactlin::rat(3, 2);
        gi.e_stages[1].f = gi.e_stages[1].f.scale(&t);
        gi.e_stages[1].g = gi.e_stages[1].g.scale(&(rat_int(1) / t));
        assert!(is_valid_gi(&gi));
    }

    #[test]
    fn gi_json_round_trip() {
        let gi = rank_one(0, 1);
        let json = serde_json::to_string(&gi).unwrap();
        let back: GeneralizedIsomorphism = serde_json::from_str(&json).unwrap();
        assert_eq!(back, gi);
    }
}
