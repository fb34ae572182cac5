//! Field-valued Gieseker vector bundle data on the two-pointed normalized
//! curve: a chain hanging at each marked point plus an isomorphism between
//! the two endpoint fibers.
//!
//! The background bundle is abstracted to its two fibers at the marked
//! points (the base fibers); every statement in scope manipulates only
//! chain data and these fibers. The endpoint fiber of a side is the right
//! fiber of its last component, or the base fiber itself when the chain is
//! empty.

use crate::chainbundle::{incl_f, incl_g, proj_f, proj_g, random_invertible, ChainBundle};
use crate::error::{Error, Result};
use crate::exactlin::{Matrix, MatrixSystem, UnknownId};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Which marked point a chain hangs at.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    One,
    Two,
}

/// A chain together with the identification of the base fiber with the
/// left fiber of its first component. Absent exactly when the chain has
/// length zero, in which case the base fiber itself is the endpoint.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AttachedChain {
    chain: ChainBundle,
    attach: Option<Matrix>,
}

impl AttachedChain {
    pub fn new(chain: ChainBundle, attach: Option<Matrix>) -> Result<Self> {
        match (&attach, chain.is_empty()) {
            (None, false) => {
                return Err(Error::Invalid(
                    "nonempty chain needs an attach matrix".into(),
                ))
            }
            (Some(_), true) => {
                return Err(Error::Invalid(
                    "length-zero chain must not carry an attach matrix".into(),
                ))
            }
            _ => {}
        }
        if let Some(a) = &attach {
            if a.rows() != chain.rank() || a.cols() != chain.rank() {
                return Err(Error::DimensionMismatch(format!(
                    "attach is {}x{}, rank is {}",
                    a.rows(),
                    a.cols(),
                    chain.rank()
                )));
            }
            if !a.is_invertible() {
                return Err(Error::NotInvertible);
            }
        }
        Ok(AttachedChain { chain, attach })
    }

    pub fn empty(n: usize) -> Self {
        AttachedChain {
            chain: ChainBundle::empty(n),
            attach: None,
        }
    }

    pub fn rank(&self) -> usize {
        self.chain.rank()
    }

    pub fn chain(&self) -> &ChainBundle {
        &self.chain
    }

    pub fn attach(&self) -> Option<&Matrix> {
        self.attach.as_ref()
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }
}

/// Extremal degree of one side: the degree of the component carrying the
/// endpoint, or infinite for an empty chain. Serialized with the sentinel
/// n + 1 standing for the infinite value.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExtremalDegree {
    Finite(usize),
    Infinite,
}

impl ExtremalDegree {
    pub fn at_least(&self, d: usize) -> bool {
        match self {
            ExtremalDegree::Finite(e) => *e >= d,
            ExtremalDegree::Infinite => true,
        }
    }

    pub fn equals(&self, d: usize) -> bool {
        matches!(self, ExtremalDegree::Finite(e) if *e == d)
    }

    /// Numeric form with n + 1 as the infinite sentinel.
    pub fn sentinel(&self, n: usize) -> usize {
        match self {
            ExtremalDegree::Finite(e) => *e,
            ExtremalDegree::Infinite => n + 1,
        }
    }
}

/// A field-valued Gieseker vector bundle datum: two attached chains and
/// the endpoint isomorphism phi from side 1's endpoint fiber to side 2's.
/// Construction enforces admissibility of the pair.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GiesekerDatum {
    n: usize,
    side1: AttachedChain,
    side2: AttachedChain,
    phi: Matrix,
}

impl GiesekerDatum {
    pub fn new(
        n: usize,
        side1: AttachedChain,
        side2: AttachedChain,
        phi: Matrix,
    ) -> Result<Self> {
        let datum = Self::new_unchecked(n, side1, side2, phi)?;
        if datum.side1.chain.total_degree() + datum.side2.chain.total_degree() > n {
            return Err(Error::Invalid(format!(
                "total degree {} exceeds rank {}",
                datum.side1.chain.total_degree() + datum.side2.chain.total_degree(),
                n
            )));
        }
        if !datum.admissible_pair() {
            return Err(Error::Invalid("datum is not an admissible pair".into()));
        }
        Ok(datum)
    }

    /// Structural checks only; admissibility of the pair is not enforced.
    /// Used by generators that filter on admissibility afterwards.
    pub fn new_unchecked(
        n: usize,
        side1: AttachedChain,
        side2: AttachedChain,
        phi: Matrix,
    ) -> Result<Self> {
        if side1.rank() != n || side2.rank() != n {
            return Err(Error::DimensionMismatch("side rank mismatch".into()));
        }
        if phi.rows() != n || phi.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "phi is {}x{}, rank is {}",
                phi.rows(),
                phi.cols(),
                n
            )));
        }
        if !phi.is_invertible() {
            return Err(Error::NotInvertible);
        }
        Ok(GiesekerDatum {
            n,
            side1,
            side2,
            phi,
        })
    }

    /// The datum with both chains empty: just the two base fibers and phi.
    pub fn empty(n: usize, phi: Matrix) -> Result<Self> {
        Self::new(n, AttachedChain::empty(n), AttachedChain::empty(n), phi)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn side(&self, side: Side) -> &AttachedChain {
        match side {
            Side::One => &self.side1,
            Side::Two => &self.side2,
        }
    }

    pub fn phi(&self) -> &Matrix {
        &self.phi
    }

    /// The chain R of length r' + r'': side 1 followed by the reversed
    /// side 2, joined at a node carrying phi. With an empty side, phi is
    /// absorbed (it re-identifies an end fiber, which admissibility does
    /// not see).
    pub fn concatenated_chain(&self) -> ChainBundle {
        ChainBundle::concatenate(
            &self.side1.chain,
            &self.side2.chain.reverse(),
            self.phi.clone(),
        )
        .expect("sides share the rank and phi is invertible")
    }

    /// Admissibility of the pair: the phi-glued chain is admissible. The
    /// length-zero concatenation is admissible by definition.
    pub fn admissible_pair(&self) -> bool {
        self.concatenated_chain().is_admissible()
    }

    /// Extremal degrees (d', d'') of the two sides.
    pub fn extremal_degrees(&self) -> (ExtremalDegree, ExtremalDegree) {
        let of = |side: &AttachedChain| match side.chain.last_degree() {
            Some(d) => ExtremalDegree::Finite(d),
            None => ExtremalDegree::Infinite,
        };
        (of(&self.side1), of(&self.side2))
    }
}

/// Handles for the four blocks of a component automorphism
/// [[A, B],[0, D]], with independent B-blocks at the two endpoint fibers
/// (Hom(O, O(1)) is two-dimensional and is evaluated at each endpoint).
struct CompAut {
    a: UnknownId,
    d: UnknownId,
    b_left: UnknownId,
    b_right: UnknownId,
}

fn comp_aut(sys: &mut MatrixSystem, n: usize, deg: usize) -> CompAut {
    let a = sys.unknown(deg, deg);
    let d = sys.unknown(n - deg, n - deg);
    let b_left = sys.unknown(deg, n - deg);
    let b_right = sys.unknown(deg, n - deg);
    sys.require_invertible(a);
    sys.require_invertible(d);
    CompAut {
        a,
        d,
        b_left,
        b_right,
    }
}

/// Terms expressing M ∘ pre, where M is the block automorphism acting on
/// one fiber (left or right chosen by `b`) and `pre` is a known matrix.
fn aut_terms(
    n: usize,
    deg: usize,
    aut: &CompAut,
    left_fiber: bool,
    pre: &Matrix,
    post: &Matrix,
) -> Vec<(Matrix, UnknownId, Matrix)> {
    let b = if left_fiber { aut.b_left } else { aut.b_right };
    vec![
        (
            post.mul(&incl_f(n, deg)).unwrap(),
            aut.a,
            proj_f(n, deg).mul(pre).unwrap(),
        ),
        (
            post.mul(&incl_f(n, deg)).unwrap(),
            b,
            proj_g(n, deg).mul(pre).unwrap(),
        ),
        (
            post.mul(&incl_g(n, deg)).unwrap(),
            aut.d,
            proj_g(n, deg).mul(pre).unwrap(),
        ),
    ]
}

/// Isomorphism test for two data: lengths and degree sequences must agree,
/// and a feasible assignment of per-component automorphisms plus base-fiber
/// isomorphisms must conjugate every gluing, attach and phi of `a` into
/// those of `b`. The search is seeded and generic; a miss after the budget
/// means "not shown equivalent".
pub fn datum_equivalent(
    a: &GiesekerDatum,
    b: &GiesekerDatum,
    draws: usize,
    seed: u64,
) -> Result<bool> {
    if a.rank() != b.rank() {
        return Ok(false);
    }
    let n = a.rank();
    for side in [Side::One, Side::Two] {
        if a.side(side).chain().degrees() != b.side(side).chain().degrees() {
            return Ok(false);
        }
    }

    let mut sys = MatrixSystem::new();
    let u1 = sys.unknown(n, n);
    let u2 = sys.unknown(n, n);
    sys.require_invertible(u1);
    sys.require_invertible(u2);

    let mut endpoint_terms: Vec<Vec<(Matrix, UnknownId, Matrix)>> = Vec::new();
    for (side, base) in [(Side::One, u1), (Side::Two, u2)] {
        let ca = a.side(side);
        let cb = b.side(side);
        let degs = ca.chain().degrees().to_vec();
        let auts: Vec<CompAut> = degs.iter().map(|&d| comp_aut(&mut sys, n, d)).collect();

        if let (Some(att_a), Some(att_b)) = (ca.attach(), cb.attach()) {
            // M_1^L · attach_a = attach_b · u_base
            let mut terms = aut_terms(n, degs[0], &auts[0], true, att_a, &Matrix::identity(n));
            terms.push((att_b.neg(), base, Matrix::identity(n)));
            sys.equation(terms, Matrix::zero(n, n))?;
        }
        for j in 0..degs.len().saturating_sub(1) {
            // M_{j+1}^L · g_j^a = g_j^b · M_j^R
            let g_a = &ca.chain().gluings()[j];
            let g_b = &cb.chain().gluings()[j];
            let mut terms = aut_terms(n, degs[j + 1], &auts[j + 1], true, g_a, &Matrix::identity(n));
            terms.extend(
                aut_terms(n, degs[j], &auts[j], false, &Matrix::identity(n), &g_b.neg()),
            );
            sys.equation(terms, Matrix::zero(n, n))?;
        }
        // terms for W_s ∘ (·): the endpoint automorphism of this side
        let w_terms = match auts.last() {
            Some(aut) => {
                aut_terms(n, *degs.last().unwrap(), aut, false, &Matrix::identity(n), &Matrix::identity(n))
            }
            None => vec![(Matrix::identity(n), base, Matrix::identity(n))],
        };
        endpoint_terms.push(w_terms);
    }

    // W_2 · phi_a = phi_b · W_1
    let w2 = endpoint_terms.pop().unwrap();
    let w1 = endpoint_terms.pop().unwrap();
    let mut terms: Vec<(Matrix, UnknownId, Matrix)> = w2
        .into_iter()
        .map(|(l, x, r)| (l, x, r.mul(a.phi()).unwrap()))
        .collect();
    terms.extend(
        w1.into_iter()
            .map(|(l, x, r)| (b.phi().neg().mul(&l).unwrap(), x, r)),
    );
    sys.equation(terms, Matrix::zero(n, n))?;

    Ok(sys.solve(draws, seed)?.is_some())
}

/// Seeded random admissible datum with the requested chain lengths.
/// Degrees are sampled with total sum ≤ n across both sides, attaches and
/// phi as random invertible integer matrices, and the draw is repeated
/// within the budget until the pair is admissible.
pub fn random_datum(
    n: usize,
    len1: usize,
    len2: usize,
    seed: u64,
    retry_budget: usize,
) -> Result<GiesekerDatum> {
    if len1 + len2 > n {
        return Err(Error::Hypothesis(format!(
            "chain lengths {} + {} exceed the rank {}",
            len1, len2, n
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = retry_budget.max(1);
    for _ in 0..budget {
        // one composition with sum ≤ n covering both sides
        let parts = len1 + len2;
        let mut remaining = n;
        let mut degs = Vec::with_capacity(parts);
        for i in 0..parts {
            let hi = remaining - (parts - i - 1);
            let d = rng.random_range(1..=hi.max(1));
            degs.push(d);
            remaining -= d;
        }
        let build_side = |degs: &[usize], rng: &mut ChaCha8Rng| -> Result<AttachedChain> {
            if degs.is_empty() {
                return Ok(AttachedChain::empty(n));
            }
            let mut gluings = Vec::new();
            for _ in 0..degs.len() - 1 {
                gluings.push(random_invertible(n, rng, budget)?);
            }
            let chain = ChainBundle::new(n, degs.to_vec(), gluings)?;
            let attach = random_invertible(n, rng, budget)?;
            AttachedChain::new(chain, Some(attach))
        };
        let side1 = build_side(&degs[..len1], &mut rng)?;
        let side2 = build_side(&degs[len1..], &mut rng)?;
        let phi = random_invertible(n, &mut rng, budget)?;
        let datum = GiesekerDatum::new_unchecked(n, side1, side2, phi)?;
        if datum.admissible_pair() {
            return Ok(datum);
        }
    }
    Err(Error::RetryBudgetExhausted(budget))
}

#[derive(Serialize, Deserialize)]
struct AttachedChainDto {
    chain: ChainBundle,
    attach: Option<Matrix>,
}

#[derive(Serialize, Deserialize)]
struct GiesekerDatumDto {
    v: u32,
    n: usize,
    side1: AttachedChainDto,
    side2: AttachedChainDto,
    phi: Matrix,
}

impl Serialize for GiesekerDatum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GiesekerDatumDto {
            v: 1,
            n: self.n,
            side1: AttachedChainDto {
                chain: self.side1.chain.clone(),
                attach: self.side1.attach.clone(),
            },
            side2: AttachedChainDto {
                chain: self.side2.chain.clone(),
                attach: self.side2.attach.clone(),
            },
            phi: self.phi.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GiesekerDatum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let dto = GiesekerDatumDto::deserialize(d)?;
        if dto.v != 1 {
            return Err(D::Error::custom(format!("unsupported schema version {}", dto.v)));
        }
        let side1 = AttachedChain::new(dto.side1.chain, dto.side1.attach)
            .map_err(|e| D::Error::custom(e.to_string()))?;
        let side2 = AttachedChain::new(dto.side2.chain, dto.side2.attach)
            .map_err(|e| D::Error::custom(e.to_string()))?;
        GiesekerDatum::new(dto.n, side1, side2, dto.phi)
            .map_err(|e| D::Error::custom(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chainbundle::AdmissibilityMethod;

    fn swap2() -> Matrix {
        Matrix::from_i64(&[&[0, 1], &[1, 0]])
    }

    fn datum_11_swap() -> GiesekerDatum {
        let chain = ChainBundle::new(2, vec![1, 1], vec![swap2()]).unwrap();
        let side1 = AttachedChain::new(chain, Some(Matrix::identity(2))).unwrap();
        GiesekerDatum::new(2, side1, AttachedChain::empty(2), Matrix::identity(2)).unwrap()
    }

    #[test]
    fn attach_presence_matches_length() {
        assert!(AttachedChain::new(ChainBundle::empty(2), Some(Matrix::identity(2))).is_err());
        let chain = ChainBundle::new(2, vec![1], vec![]).unwrap();
        assert!(AttachedChain::new(chain, None).is_err());
    }

    #[test]
    fn concatenated_chain_shapes() {
        let both_empty = GiesekerDatum::empty(3, Matrix::identity(3)).unwrap();
        assert_eq!(both_empty.concatenated_chain().len(), 0);
        assert!(both_empty.admissible_pair());

        let d = datum_11_swap();
        assert_eq!(d.concatenated_chain(), d.side(Side::One).chain().clone());
        assert!(d.admissible_pair());

        let one = ChainBundle::new(2, vec![1], vec![]).unwrap();
        let s1 = AttachedChain::new(one.clone(), Some(Matrix::identity(2))).unwrap();
        let s2 = AttachedChain::new(one, Some(Matrix::identity(2))).unwrap();
        let d = GiesekerDatum::new(2, s1, s2, swap2()).unwrap();
        let glued = d.concatenated_chain();
        assert_eq!(glued.len(), 2);
        assert_eq!(glued.gluings(), &[swap2()]);
    }

    #[test]
    fn rank_one_overloaded_pair_is_rejected() {
        // n = 1 with a component on each side: total degree 2 > 1 forces a
        // section vanishing at both ends
        let one = ChainBundle::new(1, vec![1], vec![]).unwrap();
        let s1 = AttachedChain::new(one.clone(), Some(Matrix::identity(1))).unwrap();
        let s2 = AttachedChain::new(one, Some(Matrix::identity(1))).unwrap();
        let err = GiesekerDatum::new(1, s1.clone(), s2.clone(), Matrix::identity(1));
        assert!(err.is_err());
        let glued = ChainBundle::concatenate(
            s1.chain(),
            &s2.chain().reverse(),
            Matrix::identity(1),
        )
        .unwrap();
        assert!(!glued
            .is_admissible_by(AdmissibilityMethod::Vanishing)
            .unwrap());
    }

    #[test]
    fn extremal_degree_examples() {
        let empty = GiesekerDatum::empty(2, Matrix::identity(2)).unwrap();
        let (d1, d2) = empty.extremal_degrees();
        assert_eq!(d1, ExtremalDegree::Infinite);
        assert_eq!(d1.sentinel(2), 3);
        assert_eq!(d2, ExtremalDegree::Infinite);

        let d = datum_11_swap();
        let (d1, d2) = d.extremal_degrees();
        assert_eq!(d1, ExtremalDegree::Finite(1));
        assert!(d1.at_least(1) && !d1.at_least(2));
        assert_eq!(d2, ExtremalDegree::Infinite);
    }

    #[test]
    fn datum_equivalent_reflexive_and_degree_gated() {
        let d = datum_11_swap();
        assert!(datum_equivalent(&d, &d, 64, 3).unwrap());

        let other_chain = ChainBundle::new(2, vec![2], vec![]).unwrap();
        let other = GiesekerDatum::new(
            2,
            AttachedChain::new(other_chain, Some(Matrix::identity(2))).unwrap(),
            AttachedChain::empty(2),
            Matrix::identity(2),
        )
        .unwrap();
        assert!(!datum_equivalent(&d, &other, 16, 3).unwrap());
    }

    #[test]
    fn datum_equivalent_absorbs_allowed_conjugation() {
        let d = datum_11_swap();
        // conjugate the gluing by an allowed automorphism pair: the
        // component automorphism [[a, b],[0, e]] acts on both fibers
        let m_right = Matrix::from_i64(&[&[2, 1], &[0, 1]]);
        let g = swap2().mul(&m_right).unwrap();
        let chain = ChainBundle::new(2, vec![1, 1], vec![g]).unwrap();
        let other = GiesekerDatum::new(
            2,
            AttachedChain::new(chain, Some(Matrix::identity(2))).unwrap(),
            AttachedChain::empty(2),
            Matrix::identity(2),
        )
        .unwrap();
        assert!(datum_equivalent(&d, &other, 64, 5).unwrap());
    }

    #[test]
    fn random_datum_is_deterministic_and_admissible() {
        let a = random_datum(3, 1, 1, 11, 256).unwrap();
        let b = random_datum(3, 1, 1, 11, 256).unwrap();
        assert_eq!(a, b);
        assert!(a.admissible_pair());
        let unique = random_datum(1, 1, 0, 5, 64).unwrap();
        assert_eq!(unique.side(Side::One).chain().degrees(), &[1]);
        assert!(random_datum(2, 2, 1, 1, 8).is_err());
    }

    #[test]
    fn datum_json_round_trip() {
        let d = datum_11_swap();
        let json = serde_json::to_string(&d).unwrap();
        let back: GiesekerDatum = serde_json::from_str(&json).unwrap();
        assert_eq!(back, d);
    }
}
