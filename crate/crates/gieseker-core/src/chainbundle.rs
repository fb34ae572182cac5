//! Strictly standard bundles on chains of rational curves and the
//! admissibility calculus.
//!
//! A chain of length r carries one bundle datum per component: its degree
//! d_i in [1, n] (the restriction splits as O(1)^{d_i} ⊕ O^{n−d_i}), plus
//! an invertible gluing matrix at each of the r−1 interior nodes.
//!
//! The canonical coordinate model fixes everything else: in each
//! component's left and right fiber k^n, the F-part (the O(1)-summand) is
//! coordinates 0..d and the G-part is coordinates d..n; a section is freely
//! determined by its F-part values at both endpoints and one G-part
//! constant, the identification between endpoint F-values being the
//! identity. All sheaf computations then reduce to finite linear systems
//! over the node-value coordinates.

use crate::error::{Error, Result};
use crate::exactlin::{
    image_basis, intersect, kernel_basis, preimage, rat_int, Matrix, Rat, Subspace,
};
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Projection k^n → k^d onto the F-part (first d coordinates).
pub fn proj_f(n: usize, d: usize) -> Matrix {
    Matrix::row_selector(n, &(0..d).collect::<Vec<_>>())
}

/// Projection k^n → k^{n−d} onto the G-part (last n−d coordinates).
pub fn proj_g(n: usize, d: usize) -> Matrix {
    Matrix::row_selector(n, &(d..n).collect::<Vec<_>>())
}

/// Embedding k^d → k^n of the F-part.
pub fn incl_f(n: usize, d: usize) -> Matrix {
    proj_f(n, d).transpose()
}

/// Embedding k^{n−d} → k^n of the G-part.
pub fn incl_g(n: usize, d: usize) -> Matrix {
    proj_g(n, d).transpose()
}

/// The F-part subspace span{e_0..e_{d−1}} of k^n.
pub fn f_part(n: usize, d: usize) -> Subspace {
    image_basis(&incl_f(n, d))
}

/// A strictly standard bundle on a chain of rational curves, in the
/// canonical coordinate model. Length zero is the chain Spec(K); it carries
/// only the rank.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainBundle {
    n: usize,
    degrees: Vec<usize>,
    gluings: Vec<Matrix>,
}

/// Which of the three equivalent admissibility criteria to evaluate.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AdmissibilityMethod {
    /// V_i meets the next component's F-part trivially at every interior node.
    Definition,
    /// dim H^0(E(−x_0)) equals the total degree.
    Dimension,
    /// H^0(E(−x_0−x_r)) vanishes.
    Vanishing,
}

impl ChainBundle {
    pub fn new(n: usize, degrees: Vec<usize>, gluings: Vec<Matrix>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDegree("rank must be at least 1".into()));
        }
        for (i, &d) in degrees.iter().enumerate() {
            if d < 1 || d > n {
                return Err(Error::InvalidDegree(format!(
                    "component {} has degree {}, outside [1, {}]",
                    i + 1,
                    d,
                    n
                )));
            }
        }
        let expected = degrees.len().saturating_sub(1);
        if gluings.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "chain of length {} needs {} gluings, got {}",
                degrees.len(),
                expected,
                gluings.len()
            )));
        }
        for (i, g) in gluings.iter().enumerate() {
            if g.rows() != n || g.cols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "gluing {} is {}x{}, expected {}x{}",
                    i + 1,
                    g.rows(),
                    g.cols(),
                    n,
                    n
                )));
            }
            if !g.is_invertible() {
                return Err(Error::NotInvertible);
            }
        }
        Ok(ChainBundle {
            n,
            degrees,
            gluings,
        })
    }

    /// The length-zero chain: just the rank.
    pub fn empty(n: usize) -> Self {
        ChainBundle {
            n,
            degrees: Vec::new(),
            gluings: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    /// Number of chain components.
    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn gluings(&self) -> &[Matrix] {
        &self.gluings
    }

    pub fn total_degree(&self) -> usize {
        self.degrees.iter().sum()
    }

    /// Degree of the last component, if any.
    pub fn last_degree(&self) -> Option<usize> {
        self.degrees.last().copied()
    }

    fn coords_dim(&self) -> usize {
        2 * self.len() * self.n
    }

    /// Column offset of component i's left (side = 0) or right (side = 1)
    /// fiber block in the section coordinate vector.
    fn block(&self, comp: usize, side: usize) -> usize {
        (2 * comp + side) * self.n
    }

    /// H^0(R, E(−a·x_0 − b·x_r)) as a subspace of the node-value
    /// coordinates (v_i^L, v_i^R)_{i=1..r}, realized as the kernel of the
    /// chain's linear constraint system.
    pub fn section_space(&self, vanish_left: bool, vanish_right: bool) -> Result<Subspace> {
        let r = self.len();
        let n = self.n;
        if r == 0 {
            return Err(Error::EmptyChain(
                "section_space needs at least one component".into(),
            ));
        }
        let width = self.coords_dim();
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        let mut push_row = |entries: Vec<(usize, Rat)>| {
            let mut row = vec![Rat::zero(); width];
            for (c, v) in entries {
                row[c] = v;
            }
            rows.push(row);
        };
        // per component: G-part of the left value equals G-part of the right
        for i in 0..r {
            let d = self.degrees[i];
            for j in d..n {
                push_row(vec![
                    (self.block(i, 0) + j, rat_int(1)),
                    (self.block(i, 1) + j, rat_int(-1)),
                ]);
            }
        }
        // per node: g_i · v_i^R = v_{i+1}^L
        for i in 0..r.saturating_sub(1) {
            let g = &self.gluings[i];
            for row in 0..n {
                let mut entries: Vec<(usize, Rat)> = (0..n)
                    .filter(|&c| !g.at(row, c).is_zero())
                    .map(|c| (self.block(i, 1) + c, g.at(row, c).clone()))
                    .collect();
                entries.push((self.block(i + 1, 0) + row, rat_int(-1)));
                push_row(entries);
            }
        }
        if vanish_left {
            for j in 0..n {
                push_row(vec![(self.block(0, 0) + j, rat_int(1))]);
            }
        }
        if vanish_right {
            for j in 0..n {
                push_row(vec![(self.block(r - 1, 1) + j, rat_int(1))]);
            }
        }
        let nrows = rows.len();
        let constraints = Matrix::new(nrows, width, rows.into_iter().flatten().collect())?;
        Ok(kernel_basis(&constraints))
    }

    /// The V_i recursion: V_0 = 0 in the left fiber of component 1, and
    /// V_i is the preimage, under the projection of the fiber at x_i onto
    /// the G-part of component i, of the transported image of V_{i−1}.
    pub fn v_subspaces(&self) -> Result<Vec<Subspace>> {
        let r = self.len();
        let n = self.n;
        if r == 0 {
            return Err(Error::EmptyChain(
                "v_subspaces needs at least one component".into(),
            ));
        }
        let mut vs = vec![Subspace::zero(n)];
        for i in 0..r {
            let d = self.degrees[i];
            // transport E[x_{i−1}] → G_i[x_{i−1}] = G_i[x_i]
            let transport = if i == 0 {
                proj_g(n, d)
            } else {
                proj_g(n, d).mul(&self.gluings[i - 1])?
            };
            let image = vs[i].map(&transport)?;
            vs.push(preimage(&proj_g(n, d), &image)?);
        }
        Ok(vs)
    }

    /// Evaluates one admissibility criterion. A length-zero chain is
    /// admissible under every method.
    pub fn is_admissible_by(&self, method: AdmissibilityMethod) -> Result<bool> {
        let r = self.len();
        if r == 0 {
            return Ok(true);
        }
        match method {
            AdmissibilityMethod::Definition => {
                let vs = self.v_subspaces()?;
                for i in 1..r {
                    // F_{i+1}[x_i] pulled back through the node gluing
                    let f_next = preimage(&self.gluings[i - 1], &f_part(self.n, self.degrees[i]))?;
                    if !intersect(&vs[i], &f_next)?.is_zero() {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            AdmissibilityMethod::Dimension => {
                Ok(self.section_space(true, false)?.dim() == self.total_degree())
            }
            AdmissibilityMethod::Vanishing => Ok(self.section_space(true, true)?.dim() == 0),
        }
    }

    /// Admissibility via the definition criterion (the three methods agree).
    pub fn is_admissible(&self) -> bool {
        self.is_admissible_by(AdmissibilityMethod::Definition)
            .expect("definition criterion cannot fail on a valid chain")
    }

    /// Checks that each V_i coincides with the image, in the fiber at x_i,
    /// of the sections of the subchain 1..i vanishing at x_0; the two sides
    /// are computed independently.
    pub fn v_image_check(&self) -> Result<bool> {
        let r = self.len();
        if r == 0 {
            return Ok(true);
        }
        let vs = self.v_subspaces()?;
        for i in 1..=r {
            let sub = self.subchain(1, i)?;
            let sections = sub.section_space(true, false)?;
            let block_rows: Vec<usize> =
                (sub.block(i - 1, 1)..sub.block(i - 1, 1) + self.n).collect();
            let all_cols: Vec<usize> = (0..sections.dim()).collect();
            let eval = sections.basis().submatrix(&block_rows, &all_cols);
            if image_basis(&eval) != vs[i] {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Restriction to components from..=to (1-based). Subchains of
    /// admissible chains stay admissible.
    pub fn subchain(&self, from: usize, to: usize) -> Result<ChainBundle> {
        let r = self.len();
        if from < 1 || from > to || to > r {
            return Err(Error::IndexOutOfRange(format!(
                "subchain {}..{} of a chain of length {}",
                from, to, r
            )));
        }
        Ok(ChainBundle {
            n: self.n,
            degrees: self.degrees[from - 1..to].to_vec(),
            gluings: self.gluings[from - 1..to - 1].to_vec(),
        })
    }

    /// The chain traversed from the other end: component order reversed,
    /// left/right roles swapped (the coordinate model is symmetric), each
    /// gluing replaced by its inverse. An involution; admissibility is
    /// preserved since the vanishing criterion is symmetric in x_0, x_r.
    pub fn reverse(&self) -> ChainBundle {
        let degrees: Vec<usize> = self.degrees.iter().rev().copied().collect();
        let gluings: Vec<Matrix> = self
            .gluings
            .iter()
            .rev()
            .map(|g| g.inverse().expect("stored gluings are invertible"))
            .collect();
        ChainBundle {
            n: self.n,
            degrees,
            gluings,
        }
    }

    /// Joins two chains at a node carrying `node_gluing` (right fiber of
    /// a's last component to left fiber of b's first). If either side has
    /// length zero the other chain is returned unchanged and the gluing is
    /// absorbed; the caller owns any end-fiber bookkeeping in that case.
    pub fn concatenate(a: &ChainBundle, b: &ChainBundle, node_gluing: Matrix) -> Result<ChainBundle> {
        if a.n != b.n {
            return Err(Error::DimensionMismatch(format!(
                "rank {} vs {}",
                a.n, b.n
            )));
        }
        if a.is_empty() {
            return Ok(b.clone());
        }
        if b.is_empty() {
            return Ok(a.clone());
        }
        if node_gluing.rows() != a.n || node_gluing.cols() != a.n || !node_gluing.is_invertible() {
            return Err(Error::NotInvertible);
        }
        let mut degrees = a.degrees.clone();
        degrees.extend_from_slice(&b.degrees);
        let mut gluings = a.gluings.clone();
        gluings.push(node_gluing);
        gluings.extend_from_slice(&b.gluings);
        Ok(ChainBundle {
            n: a.n,
            degrees,
            gluings,
        })
    }
}

/// A section presented by its node values, one (left, right) pair per
/// component. Used to interpret and sanity-check section-space coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SectionVector {
    n: usize,
    values: Vec<(Vec<Rat>, Vec<Rat>)>,
}

impl SectionVector {
    pub fn from_coords(cb: &ChainBundle, coords: &[Rat]) -> Result<SectionVector> {
        if coords.len() != cb.coords_dim() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} coordinates, got {}",
                cb.coords_dim(),
                coords.len()
            )));
        }
        let n = cb.n;
        let values = (0..cb.len())
            .map(|i| {
                (
                    coords[cb.block(i, 0)..cb.block(i, 0) + n].to_vec(),
                    coords[cb.block(i, 1)..cb.block(i, 1) + n].to_vec(),
                )
            })
            .collect();
        Ok(SectionVector { n, values })
    }

    pub fn values(&self) -> &[(Vec<Rat>, Vec<Rat>)] {
        &self.values
    }

    /// Verifies the section constraints: constant G-parts per component and
    /// the gluing relation at every node.
    pub fn validate(&self, cb: &ChainBundle) -> Result<bool> {
        for (i, (l, r)) in self.values.iter().enumerate() {
            let d = cb.degrees[i];
            if l[d..] != r[d..] {
                return Ok(false);
            }
        }
        for i in 0..cb.len().saturating_sub(1) {
            let glued = cb.gluings[i].mul_vec(&self.values[i].1)?;
            if glued != self.values[i + 1].0 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A line bundle on a chain, recorded by its per-component degrees.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LineBundleOnChain {
    pub degrees: Vec<i64>,
}

impl LineBundleOnChain {
    pub fn total_degree(&self) -> i64 {
        self.degrees.iter().sum()
    }
}

/// Componentwise tensor degree; additivity deg(L⊗M) = deg L + deg M is
/// forced by the construction and asserted by the tests.
pub fn line_tensor_degree(l1: &LineBundleOnChain, l2: &LineBundleOnChain) -> Result<i64> {
    if l1.degrees.len() != l2.degrees.len() {
        return Err(Error::DimensionMismatch(format!(
            "line bundles on chains of length {} vs {}",
            l1.degrees.len(),
            l2.degrees.len()
        )));
    }
    Ok(l1
        .degrees
        .iter()
        .zip(&l2.degrees)
        .map(|(a, b)| a + b)
        .sum())
}

/// Samples a random invertible integer matrix with entries in [−3, 3].
pub fn random_invertible(n: usize, rng: &mut ChaCha8Rng, retries: usize) -> Result<Matrix> {
    for _ in 0..retries {
        let m = Matrix::from_fn(n, n, |_, _| rat_int(rng.random_range(-3i64..=3)));
        if m.is_invertible() {
            return Ok(m);
        }
    }
    Err(Error::RetryBudgetExhausted(retries))
}

/// Default resampling budget for random instance generation.
pub const DEFAULT_RESAMPLE_BUDGET: usize = 256;

/// Seeded random chain generator. With `require_admissible` the degrees are
/// sampled with Σ d_i ≤ n (necessary since dim V_r = Σ d_i ≤ n) and the
/// draw is repeated, within the budget, until the chain is admissible.
pub fn random_chain(
    n: usize,
    r: usize,
    seed: u64,
    require_admissible: bool,
    retry_budget: usize,
) -> Result<ChainBundle> {
    if require_admissible && r > n {
        return Err(Error::Hypothesis(format!(
            "an admissible chain of rank {} has length at most {}, requested {}",
            n, n, r
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..retry_budget.max(1) {
        let mut degrees = Vec::with_capacity(r);
        if require_admissible {
            let mut budget = n;
            for i in 0..r {
                let remaining = r - i - 1;
                let hi = budget - remaining;
                let d = rng.random_range(1..=hi.max(1)) as usize;
                degrees.push(d);
                budget -= d;
            }
        } else {
            for _ in 0..r {
                degrees.push(rng.random_range(1..=n as i64) as usize);
            }
        }
        let mut gluings = Vec::with_capacity(r.saturating_sub(1));
        for _ in 0..r.saturating_sub(1) {
            gluings.push(random_invertible(n, &mut rng, retry_budget.max(1))?);
        }
        let cb = ChainBundle::new(n, degrees, gluings)?;
        if !require_admissible || cb.is_admissible() {
            return Ok(cb);
        }
    }
    Err(Error::RetryBudgetExhausted(retry_budget))
}

#[derive(Serialize, Deserialize)]
struct ChainBundleDto {
    v: u32,
    n: usize,
    degrees: Vec<usize>,
    gluings: Vec<Matrix>,
}

impl Serialize for ChainBundle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ChainBundleDto {
            v: 1,
            n: self.n,
            degrees: self.degrees.clone(),
            gluings: self.gluings.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ChainBundle {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let dto = ChainBundleDto::deserialize(d)?;
        if dto.v != 1 {
            return Err(D::Error::custom(format!("unsupported schema version {}", dto.v)));
        }
        ChainBundle::new(dto.n, dto.degrees, dto.gluings).map_err(|e| D::Error::custom(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn swap2() -> Matrix {
        Matrix::from_i64(&[&[0, 1], &[1, 0]])
    }

    fn chain_11_swap() -> ChainBundle {
        ChainBundle::new(2, vec![1, 1], vec![swap2()]).unwrap()
    }

    #[test]
    fn construction_rejects_bad_degrees() {
        assert!(ChainBundle::new(2, vec![0], vec![]).is_err());
        assert!(ChainBundle::new(2, vec![3], vec![]).is_err());
        assert!(ChainBundle::new(2, vec![1, 1], vec![Matrix::zero(2, 2)]).is_err());
        assert!(ChainBundle::new(2, vec![1, 1], vec![]).is_err());
    }

    #[test]
    fn section_space_dimensions() {
        // single component O(1)^2: h^0 = 2d + (n−d) = 4
        let cb = ChainBundle::new(2, vec![2], vec![]).unwrap();
        assert_eq!(cb.section_space(false, false).unwrap().dim(), 4);
        // admissible instance: no section vanishes at both ends
        assert_eq!(cb.section_space(true, true).unwrap().dim(), 0);
        // swap-glued (1,1) chain: dim H^0(E(−x_0)) = Σ d_i = 2
        assert_eq!(chain_11_swap().section_space(true, false).unwrap().dim(), 2);
    }

    #[test]
    fn section_space_rejects_empty_chain() {
        assert!(ChainBundle::empty(2).section_space(false, false).is_err());
    }

    #[test]
    fn section_vectors_satisfy_constraints() {
        let cb = chain_11_swap();
        let sections = cb.section_space(false, false).unwrap();
        assert_eq!(sections.dim(), 2 + cb.total_degree());
        for c in 0..sections.dim() {
            let sv = SectionVector::from_coords(&cb, &sections.basis().col(c)).unwrap();
            assert!(sv.validate(&cb).unwrap());
        }
    }

    #[test]
    fn v_subspace_recursion() {
        let cb = chain_11_swap();
        let vs = cb.v_subspaces().unwrap();
        assert_eq!(vs[0], Subspace::zero(2));
        // sections of O(1)⊕O vanishing at x_0 evaluate into the F-part at x_1
        assert_eq!(vs[1], f_part(2, 1));
        // admissible chain: dim V_i = partial degree sums
        assert_eq!(vs[2].dim(), 2);
    }

    #[test]
    fn admissibility_three_ways() {
        let identity_glued = ChainBundle::new(2, vec![1, 1], vec![Matrix::identity(2)]).unwrap();
        let swap_glued = chain_11_swap();
        let single = ChainBundle::new(3, vec![2], vec![]).unwrap();
        for m in [
            AdmissibilityMethod::Definition,
            AdmissibilityMethod::Dimension,
            AdmissibilityMethod::Vanishing,
        ] {
            assert!(!identity_glued.is_admissible_by(m).unwrap());
            assert!(swap_glued.is_admissible_by(m).unwrap());
            assert!(single.is_admissible_by(m).unwrap());
            assert!(ChainBundle::empty(4).is_admissible_by(m).unwrap());
        }
    }

    #[test]
    fn v_image_check_examples() {
        assert!(ChainBundle::new(2, vec![1], vec![]).unwrap().v_image_check().unwrap());
        assert!(chain_11_swap().v_image_check().unwrap());
    }

    #[test]
    fn subchain_examples() {
        let cb = chain_11_swap();
        assert_eq!(cb.subchain(1, 2).unwrap(), cb);
        let tail = cb.subchain(2, 2).unwrap();
        assert_eq!(tail.degrees(), &[1]);
        assert!(tail.gluings().is_empty());
        assert!(cb.subchain(0, 1).is_err());
        assert!(cb.subchain(1, 3).is_err());
    }

    #[test]
    fn reverse_is_involution_and_preserves_admissibility() {
        let cb = ChainBundle::new(
            3,
            vec![1, 2],
            vec![Matrix::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[1, 1, 1]])],
        )
        .unwrap();
        assert_eq!(cb.reverse().degrees(), &[2, 1]);
        assert_eq!(cb.reverse().reverse(), cb);
        for m in [
            AdmissibilityMethod::Definition,
            AdmissibilityMethod::Dimension,
            AdmissibilityMethod::Vanishing,
        ] {
            assert_eq!(
                cb.is_admissible_by(m).unwrap(),
                cb.reverse().is_admissible_by(m).unwrap()
            );
        }
    }

    #[test]
    fn concatenate_examples() {
        let a = ChainBundle::new(2, vec![1], vec![]).unwrap();
        let b = ChainBundle::new(2, vec![1], vec![]).unwrap();
        let joined = ChainBundle::concatenate(&a, &b, swap2()).unwrap();
        assert_eq!(joined, chain_11_swap());
        assert_eq!(
            ChainBundle::concatenate(&a, &ChainBundle::empty(2), Matrix::identity(2)).unwrap(),
            a
        );
        assert_eq!(
            joined.total_degree(),
            a.total_degree() + b.total_degree()
        );
    }

    #[test]
    fn concatenate_is_associative_up_to_reassociation() {
        let a = ChainBundle::new(2, vec![1], vec![]).unwrap();
        let g1 = swap2();
        let g2 = Matrix::from_i64(&[&[1, 1], &[0, 1]]);
        let left = ChainBundle::concatenate(
            &ChainBundle::concatenate(&a, &a, g1.clone()).unwrap(),
            &a,
            g2.clone(),
        )
        .unwrap();
        let right = ChainBundle::concatenate(
            &a,
            &ChainBundle::concatenate(&a, &a, g2).unwrap(),
            g1,
        )
        .unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn line_bundle_degrees() {
        let l1 = LineBundleOnChain { degrees: vec![1, 0] };
        let l2 = LineBundleOnChain { degrees: vec![0, 2] };
        assert_eq!(line_tensor_degree(&l1, &l2).unwrap(), 3);
        assert_eq!(l1.total_degree() + l2.total_degree(), 3);
        let short = LineBundleOnChain { degrees: vec![5] };
        assert!(line_tensor_degree(&l1, &short).is_err());
    }

    #[test]
    fn random_chain_is_deterministic_and_admissible() {
        let a = random_chain(3, 2, 42, true, DEFAULT_RESAMPLE_BUDGET).unwrap();
        let b = random_chain(3, 2, 42, true, DEFAULT_RESAMPLE_BUDGET).unwrap();
        assert_eq!(a, b);
        assert!(a.is_admissible());
        assert!(random_chain(2, 3, 1, true, 16).is_err());
        let trivial = random_chain(1, 1, 9, true, 16).unwrap();
        assert_eq!(trivial.degrees(), &[1]);
        assert!(trivial.gluings().is_empty());
    }

    #[test]
    fn chain_json_round_trip() {
        let cb = chain_11_swap();
        let json = serde_json::to_string(&cb).unwrap();
        assert!(json.contains("\"v\":1"));
        let back: ChainBundle = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cb);
    }
}
