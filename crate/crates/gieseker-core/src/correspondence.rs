//! Contraction of extremal chain components, extraction and insertion of
//! bf-morphisms, and the round trip between Gieseker data and generalized
//! isomorphisms.
//!
//! Contracting a side whose extremal degree equals the threshold removes
//! the last component and replaces the attachment fiber V by W ⊕ V/W,
//! where W is the preimage of the removed component's F-part under the
//! node gluing. When a neighbor component exists its bundle is rewritten
//! in canonical coordinates from the section model, with the merged degree
//! δ' + d. The extracted bf-morphism records exactly the data the
//! contraction forgets, so insertion inverts contraction bit-for-bit and
//! the full sequences realize the correspondence between the two kinds of
//! objects.

use crate::chainbundle::{f_part, incl_f, incl_g, proj_f, proj_g, ChainBundle};
use crate::error::{Error, Result};
use crate::exactlin::{image_basis, kernel_basis, rat_int, Matrix, Rat, Subspace};
use crate::geniso::{
    composite_maps, grassmannian_point, validate_bf, validate_gi, BfMorphism,
    GeneralizedIsomorphism,
};
use crate::gvbd::{datum_equivalent, AttachedChain, GiesekerDatum, Side};
use num_traits::Zero;
use serde::Serialize;

/// The fiber replacement V ⇝ W ⊕ V/W induced by collapsing a bubble of
/// degree d attached through the invertible map c: V → (bubble left fiber).
/// W = c⁻¹(F-part); the new fiber is coordinatized with the echelon basis
/// of W first and the canonical echelon lift of V/W after it.
#[derive(Clone, Debug)]
pub struct ElementaryModification {
    pub n: usize,
    pub d: usize,
    /// W ⊂ V, dimension d.
    pub w: Subspace,
    /// n × d echelon basis of W.
    pub w_basis: Matrix,
    /// n × (n−d) canonical lift of V/W (standard vectors at non-pivot rows).
    pub lift: Matrix,
    /// (n−d) × n canonical projection V → V/W.
    pub proj_quotient: Matrix,
    /// (n−d) × (n−d) identification V/W ≅ G-coordinates through c.
    pub iota_g: Matrix,
}

impl ElementaryModification {
    /// Embedding of the V/W-part into the new fiber (last n−d coordinates).
    pub fn incl_quotient(&self) -> Matrix {
        incl_g(self.n, self.d)
    }

    /// Projection of the new fiber onto its W-part (first d coordinates).
    pub fn proj_w_part(&self) -> Matrix {
        proj_f(self.n, self.d)
    }
}

/// Builds the elementary modification data for an attachment map c and a
/// bubble degree d.
pub fn elementary_modification(c: &Matrix, d: usize) -> Result<ElementaryModification> {
    let n = c.rows();
    if !c.is_invertible() {
        return Err(Error::NotInvertible);
    }
    if d < 1 || d > n {
        return Err(Error::InvalidDegree(format!("bubble degree {d} outside [1, {n}]")));
    }
    let w = kernel_basis(&proj_g(n, d).mul(c)?);
    debug_assert_eq!(w.dim(), d);
    let w_basis = w.basis().clone();
    let lift = w.quotient_lift();
    let proj_quotient = w.quotient_projection();
    let iota_g = proj_g(n, d).mul(c)?.mul(&lift)?;
    Ok(ElementaryModification {
        n,
        d,
        w,
        w_basis,
        lift,
        proj_quotient,
        iota_g,
    })
}

/// Normal form of a valid bf-morphism: invertible P on the source and Q on
/// the target with Q·f·P⁻¹ = diag(μ·I_d, I_{n−d}) and
/// P·g·Q⁻¹ = diag(I_d, μ·I_{n−d}), where d = n − bf_rank. Deterministic
/// through the echelon choices on kernel and image.
pub fn normal_form_bf(b: &BfMorphism) -> Result<(Matrix, Matrix)> {
    let violations = validate_bf(b);
    if !violations.is_empty() {
        return Err(Error::Invalid(violations.join("; ")));
    }
    let n = b.n;
    let d = n - b.bf_rank;
    if !b.mu.is_zero() {
        let block = Matrix::vstack(&[
            &Matrix::hstack(&[
                &Matrix::identity(d).scale(&b.mu),
                &Matrix::zero(d, n - d),
            ])?,
            &Matrix::hstack(&[&Matrix::zero(n - d, d), &Matrix::identity(n - d)])?,
        ])?;
        return Ok((Matrix::identity(n), block.mul(&b.f.inverse()?)?));
    }
    let k = kernel_basis(&b.f);
    let p = Matrix::hstack(&[k.basis(), &k.quotient_lift()])?.inverse()?;
    let j = image_basis(&b.f);
    // preimages of the kernel basis under g, taken in the canonical
    // complement of im(f) = ker(g)'s companion
    let l_j = j.quotient_lift();
    let y = b
        .g
        .mul(&l_j)?
        .solve(k.basis())?
        .ok_or_else(|| Error::InternalFault("bf normal form: kernel not reachable".into()))?;
    let x = l_j.mul(&y)?;
    let q = Matrix::hstack(&[&x, &b.f.mul(&k.quotient_lift())?])?.inverse()?;
    Ok((p, q))
}

/// Canonical coordinates of a strictly standard bundle on one component,
/// presented by its section space S ⊂ L ⊕ R (left values then right
/// values). Returns the degree δ = dim S − n and the invertible maps
/// T_left, T_right from canonical k^n to the two presentation coordinate
/// systems, chosen so that S = {(T_left x, T_right y) : x_G = y_G}.
struct CanonicalPresentation {
    degree: usize,
    t_left: Matrix,
    t_right: Matrix,
}

fn reduce_mod(sub: &Subspace, v: &Matrix) -> Matrix {
    // v minus the pivot-row-matched combination of the subspace basis
    let sel = Matrix::row_selector(sub.ambient_dim(), &sub.pivot_rows());
    v.sub(&sub.basis().mul(&sel.mul(v).unwrap()).unwrap()).unwrap()
}

fn canonical_rewrite(n: usize, sections: &Subspace) -> Result<CanonicalPresentation> {
    if sections.ambient_dim() != 2 * n || sections.dim() < n {
        return Err(Error::StructuralInsertion(format!(
            "section space of dimension {} in k^{} is not a component model",
            sections.dim(),
            sections.ambient_dim()
        )));
    }
    let degree = sections.dim() - n;
    if degree < 1 || degree > n {
        return Err(Error::StructuralInsertion(format!(
            "component degree {degree} outside [1, {n}]"
        )));
    }
    let basis = sections.basis();
    let rows_top: Vec<usize> = (0..n).collect();
    let rows_bot: Vec<usize> = (n..2 * n).collect();
    let all: Vec<usize> = (0..sections.dim()).collect();
    let top = basis.submatrix(&rows_top, &all);
    let bot = basis.submatrix(&rows_bot, &all);

    // F-parts: values of sections vanishing at the opposite end
    let f_left = image_basis(&top.mul(kernel_basis(&bot).basis())?);
    let f_right = image_basis(&bot.mul(kernel_basis(&top).basis())?);
    if f_left.dim() != degree || f_right.dim() != degree {
        return Err(Error::StructuralInsertion(format!(
            "F-parts have dimensions {} and {}, expected {}",
            f_left.dim(),
            f_right.dim(),
            degree
        )));
    }

    // G-representatives: for each canonical complement row j of F_left,
    // the unique section with left value e_j and right value reduced
    // modulo F_right
    let mut t_left_cols: Vec<Matrix> = vec![f_left.basis().clone()];
    let mut t_right_cols: Vec<Matrix> = vec![f_right.basis().clone()];
    for &j in &f_left.complement_rows() {
        let e_j = Matrix::from_fn(n, 1, |r, _| if r == j { rat_int(1) } else { Rat::zero() });
        let coeff = top.solve(&e_j)?.ok_or_else(|| {
            Error::StructuralInsertion("left evaluation of the section space is not surjective".into())
        })?;
        let rho = reduce_mod(&f_right, &bot.mul(&coeff)?);
        t_left_cols.push(e_j);
        t_right_cols.push(rho);
    }
    let t_left = Matrix::hstack(&t_left_cols.iter().collect::<Vec<_>>())?;
    let t_right = Matrix::hstack(&t_right_cols.iter().collect::<Vec<_>>())?;
    if !t_left.is_invertible() || !t_right.is_invertible() {
        return Err(Error::StructuralInsertion(
            "canonical coordinate maps are singular".into(),
        ));
    }

    // the rewrite must present the section space exactly as the canonical
    // model {(x, y) : x_G = y_G}
    let mut gens: Vec<Matrix> = Vec::new();
    for k in 0..degree {
        gens.push(Matrix::vstack(&[&t_left.col_matrix(k), &Matrix::zero(n, 1)])?);
        gens.push(Matrix::vstack(&[&Matrix::zero(n, 1), &t_right.col_matrix(k)])?);
    }
    for k in degree..n {
        gens.push(Matrix::vstack(&[
            &t_left.col_matrix(k),
            &t_right.col_matrix(k),
        ])?);
    }
    let expected = Subspace::from_span(
        2 * n,
        &Matrix::hstack(&gens.iter().collect::<Vec<_>>())?,
    )?;
    if &expected != sections {
        return Err(Error::InternalFault(
            "canonical rewrite does not reproduce the section space".into(),
        ));
    }
    Ok(CanonicalPresentation {
        degree,
        t_left,
        t_right,
    })
}

/// Section space of the merged component produced by collapsing a bubble
/// of degree `d` at the right end of a neighbor of degree `deg`: sections
/// acquire a simple pole at the node, constrained by W (presented through
/// its canonical quotient projection). Parameters are (w, b, c, β); left
/// value (c, β), right value (w, π(b, β)).
fn up_modified_sections(n: usize, deg: usize, d: usize, proj_quotient: &Matrix) -> Result<Subspace> {
    let zero_l_w = Matrix::zero(n, d);
    let zero_l_b = Matrix::zero(n, deg);
    let l_c = incl_f(n, deg);
    let l_beta = incl_g(n, deg);
    let top = Matrix::hstack(&[&zero_l_w, &zero_l_b, &l_c, &l_beta])?;

    let r_w = incl_f(n, d);
    let r_b = incl_g(n, d).mul(proj_quotient)?.mul(&incl_f(n, deg))?;
    let zero_r_c = Matrix::zero(n, deg);
    let r_beta = incl_g(n, d).mul(proj_quotient)?.mul(&incl_g(n, deg))?;
    let bot = Matrix::hstack(&[&r_w, &r_b, &zero_r_c, &r_beta])?;

    Ok(image_basis(&Matrix::vstack(&[&top, &bot])?))
}

/// Section space of the component obtained by forcing right values into
/// J ⊂ k^n (the sub-sheaf modification inverting a contraction). The new
/// right fiber is coordinatized as J-coordinates followed by k^n/J;
/// parameters are (x_F, u); left value (x_F, G-part of B_J u), right value
/// (u, π_{k^n/J}(x_F embedded)).
fn down_modified_sections(n: usize, deg: usize, j_sub: &Subspace) -> Result<Subspace> {
    let jdim = j_sub.dim();
    let l_xf = incl_f(n, deg);
    let l_u = incl_g(n, deg)
        .mul(&proj_g(n, deg))?
        .mul(j_sub.basis())?;
    let top = Matrix::hstack(&[&l_xf, &l_u])?;

    let r_xf = incl_g(n, jdim)
        .mul(&j_sub.quotient_projection())?
        .mul(&incl_f(n, deg))?;
    let r_u = incl_f(n, jdim);
    let bot = Matrix::hstack(&[&r_xf, &r_u])?;

    Ok(image_basis(&Matrix::vstack(&[&top, &bot])?))
}

fn replace_side(d: &GiesekerDatum, side: Side, new_side: AttachedChain, phi: Matrix) -> Result<GiesekerDatum> {
    let (s1, s2) = match side {
        Side::One => (new_side, d.side(Side::Two).clone()),
        Side::Two => (d.side(Side::One).clone(), new_side),
    };
    GiesekerDatum::new(d.rank(), s1, s2, phi)
}

fn update_phi(d: &GiesekerDatum, side: Side, endpoint_update: &Matrix) -> Result<Matrix> {
    // endpoint_update maps the new endpoint coordinates to the old ones
    Ok(match side {
        Side::One => d.phi().mul(endpoint_update)?,
        Side::Two => endpoint_update.inverse()?.mul(d.phi())?,
    })
}

/// One contraction step at the chosen side with the given degree
/// threshold. Requires the side's extremal degree to be ≥ the threshold.
/// If it exceeds the threshold (or the side is empty) the datum is
/// unchanged and the unit bf-morphism of rank n − threshold is extracted;
/// at equality the last component is collapsed, the neighbor (or base
/// fiber) is rewritten, and the extracted bf-morphism has μ = 0.
pub fn contract_step(
    d: &GiesekerDatum,
    side: Side,
    threshold: usize,
) -> Result<(GiesekerDatum, BfMorphism)> {
    let n = d.rank();
    if threshold < 1 || threshold > n {
        return Err(Error::Hypothesis(format!(
            "threshold {threshold} outside [1, {n}]"
        )));
    }
    let att = d.side(side);
    let ext = match side {
        Side::One => d.extremal_degrees().0,
        Side::Two => d.extremal_degrees().1,
    };
    if !ext.at_least(threshold) {
        return Err(Error::Hypothesis(format!(
            "extremal degree is below the threshold {threshold}"
        )));
    }
    if att.is_empty() || !ext.equals(threshold) {
        return Ok((d.clone(), BfMorphism::unit(n, n - threshold)));
    }

    let dd = threshold;
    let r = att.len();
    let chain = att.chain();
    let (new_side, bf, endpoint_update) = if r == 1 {
        // the removed component was attached directly to the base fiber:
        // the base keeps its coordinate frame, read through the gluing
        let c = att.attach().expect("nonempty side carries an attach").clone();
        let f = c.inverse()?.mul(&incl_g(n, dd))?.mul(&proj_g(n, dd))?;
        let g = incl_f(n, dd).mul(&proj_f(n, dd))?.mul(&c)?;
        let bf = BfMorphism {
            n,
            mu: Rat::zero(),
            f,
            g,
            bf_rank: n - dd,
        };
        (AttachedChain::empty(n), bf, c)
    } else {
        let c = chain.gluings()[r - 2].clone();
        let em = elementary_modification(&c, dd)?;
        let neighbor_deg = chain.degrees()[r - 2];
        let sections = up_modified_sections(n, neighbor_deg, dd, &em.proj_quotient)?;
        let pres = canonical_rewrite(n, &sections)
            .map_err(|e| Error::InternalFault(format!("contract rewrite: {e}")))?;
        if pres.degree != neighbor_deg + dd {
            return Err(Error::InternalFault(format!(
                "merged degree {} instead of {}",
                pres.degree,
                neighbor_deg + dd
            )));
        }
        let t_left_inv = pres.t_left.inverse()?;
        let mut degrees = chain.degrees()[..r - 1].to_vec();
        degrees[r - 2] = pres.degree;
        let mut gluings = chain.gluings()[..r - 2].to_vec();
        let attach = if r == 2 {
            t_left_inv.mul(att.attach().expect("nonempty side carries an attach"))?
        } else {
            let toward_base = gluings.pop().expect("r ≥ 3 keeps an interior gluing");
            gluings.push(t_left_inv.mul(&toward_base)?);
            att.attach().expect("nonempty side carries an attach").clone()
        };
        let new_chain = ChainBundle::new(n, degrees, gluings)?;
        let new_side = AttachedChain::new(new_chain, Some(attach))?;

        let iota_g_inv = em.iota_g.inverse()?;
        let a_prime = proj_f(n, dd).mul(&c)?.mul(&em.w_basis)?;
        let f_phys = incl_g(n, dd).mul(&iota_g_inv)?.mul(&proj_g(n, dd))?;
        let g_phys = incl_f(n, dd).mul(&a_prime)?.mul(&proj_f(n, dd))?;
        let sigma = Matrix::hstack(&[
            &incl_f(n, dd).mul(&a_prime)?,
            &incl_g(n, dd).mul(&em.iota_g)?,
        ])?;
        let bf = BfMorphism {
            n,
            mu: Rat::zero(),
            f: pres.t_right.inverse()?.mul(&f_phys)?,
            g: g_phys.mul(&pres.t_right)?,
            bf_rank: n - dd,
        };
        (new_side, bf, sigma.mul(&pres.t_right)?)
    };

    if !validate_bf(&bf).is_empty() {
        return Err(Error::InternalFault(format!(
            "extracted bf-morphism is invalid: {}",
            validate_bf(&bf).join("; ")
        )));
    }
    let phi = update_phi(d, side, &endpoint_update)?;
    let datum = replace_side(d, side, new_side, phi)
        .map_err(|e| Error::InternalFault(format!("contracted datum rejected: {e}")))?;
    Ok((datum, bf))
}

/// Result of an insertion: the grown datum plus the change of coordinates
/// applied to the bf-morphism's source (identity unless the kernel of f
/// had to be moved into standard position). The source change maps the
/// given source coordinates to the new endpoint coordinates.
#[derive(Clone, Debug)]
pub struct InsertOutcome {
    pub datum: GiesekerDatum,
    pub source_change: Matrix,
}

/// One insertion step, the inverse of [`contract_step`]. With μ ≠ 0 the
/// datum is unchanged (the caller updates its endpoint identification by
/// μ⁻¹·f). With μ = 0 a component of degree n − stage + 1 is appended at
/// the side's end, the neighbor is rewritten downward, and the node data
/// is chosen so that contracting again returns the inputs bit-for-bit.
pub fn insert_step(
    d: &GiesekerDatum,
    side: Side,
    b: &BfMorphism,
    stage: usize,
) -> Result<InsertOutcome> {
    let n = d.rank();
    if stage < 1 || stage > n {
        return Err(Error::Hypothesis(format!("stage {stage} outside [1, {n}]")));
    }
    if b.n != n {
        return Err(Error::DimensionMismatch(format!(
            "bf-morphism rank {} vs datum rank {}",
            b.n, n
        )));
    }
    if b.bf_rank != stage - 1 {
        return Err(Error::Hypothesis(format!(
            "stage {} expects declared rank {}, got {}",
            stage,
            stage - 1,
            b.bf_rank
        )));
    }
    let violations = validate_bf(b);
    if !violations.is_empty() {
        return Err(Error::Invalid(violations.join("; ")));
    }
    if !b.mu.is_zero() {
        return Ok(InsertOutcome {
            datum: d.clone(),
            source_change: Matrix::identity(n),
        });
    }
    let dd = n - b.bf_rank;

    // move ker(f) into standard position on the source side if needed
    let k = kernel_basis(&b.f);
    let (source_change, b_used) = if k == f_part(n, dd) {
        (Matrix::identity(n), b.clone())
    } else {
        let p = Matrix::hstack(&[k.basis(), &k.quotient_lift()])?.inverse()?;
        let b_norm = BfMorphism {
            n,
            mu: Rat::zero(),
            f: b.f.mul(&p.inverse()?)?,
            g: p.mul(&b.g)?,
            bf_rank: b.bf_rank,
        };
        (p, b_norm)
    };

    let att = d.side(side);
    let outcome_datum = if att.is_empty() {
        // rebuild the attach map from the bf-morphism: its F-rows come from
        // g, its G-rows from a transported inverse of f
        let j = kernel_basis(&b_used.g);
        let b_j = j.basis();
        let x_s = b_used
            .f
            .solve(b_j)?
            .ok_or_else(|| Error::InternalFault("im(f) misses ker(g)".into()))?;
        let sel_p = Matrix::row_selector(n, &j.pivot_rows());
        let z = proj_g(n, dd).mul(&x_s)?.mul(&sel_p)?;
        let c = incl_f(n, dd)
            .mul(&proj_f(n, dd))?
            .mul(&b_used.g)?
            .add(&incl_g(n, dd).mul(&z)?)?;
        if !c.is_invertible() {
            return Err(Error::StructuralInsertion(
                "reconstructed attach map is singular".into(),
            ));
        }
        let chain = ChainBundle::new(n, vec![dd], vec![])?;
        let new_side = AttachedChain::new(chain, Some(c.clone()))?;
        let phi = match side {
            Side::One => d.phi().mul(&c.inverse()?)?,
            Side::Two => c.mul(d.phi())?,
        };
        replace_side(d, side, new_side, phi)
            .map_err(|e| Error::StructuralInsertion(format!("inserted datum rejected: {e}")))?
    } else {
        let r = att.len();
        let chain = att.chain();
        let merged_deg = chain.degrees()[r - 1];
        if merged_deg <= dd {
            return Err(Error::StructuralInsertion(format!(
                "neighbor degree {merged_deg} does not exceed the inserted degree {dd}"
            )));
        }
        let j = kernel_basis(&b_used.g);
        let down = down_modified_sections(n, merged_deg, &j)?;
        let pres_down = canonical_rewrite(n, &down)?;
        if pres_down.degree != merged_deg - dd {
            return Err(Error::StructuralInsertion(format!(
                "downward rewrite yields degree {}, expected {}",
                pres_down.degree,
                merged_deg - dd
            )));
        }
        // W in the new neighbor coordinates: the k^n/J-block of the
        // modified fiber
        let w_gens = pres_down.t_right.inverse()?.mul(&incl_g(n, n - dd))?;
        let w = image_basis(&w_gens);
        let w_basis = w.basis().clone();
        let lift = w.quotient_lift();
        let proj_quotient = w.quotient_projection();

        let up = up_modified_sections(n, pres_down.degree, dd, &proj_quotient)?;
        let pres_up = canonical_rewrite(n, &up)?;
        if pres_up.degree != merged_deg {
            return Err(Error::StructuralInsertion(format!(
                "upward rewrite yields degree {}, expected {}",
                pres_up.degree, merged_deg
            )));
        }

        // read the node-gluing blocks off the bf-morphism through T_right
        let ft = pres_up.t_right.mul(&b_used.f)?;
        let iota_g_inv = proj_g(n, dd).mul(&ft)?.mul(&incl_g(n, dd))?;
        if ft
            != incl_g(n, dd)
                .mul(&iota_g_inv)?
                .mul(&proj_g(n, dd))?
            || !iota_g_inv.is_invertible()
        {
            return Err(Error::StructuralInsertion(
                "bf-morphism f is not adapted to the rewritten fiber".into(),
            ));
        }
        let gt = b_used.g.mul(&pres_up.t_right)?;
        let a_prime = proj_f(n, dd).mul(&gt)?.mul(&incl_f(n, dd))?;
        if gt != incl_f(n, dd).mul(&a_prime)?.mul(&proj_f(n, dd))? || !a_prime.is_invertible() {
            return Err(Error::StructuralInsertion(
                "bf-morphism g is not adapted to the rewritten fiber".into(),
            ));
        }
        let iota_g = iota_g_inv.inverse()?;
        let c = Matrix::hstack(&[
            &incl_f(n, dd).mul(&a_prime)?,
            &incl_g(n, dd).mul(&iota_g)?,
        ])?
        .mul(&Matrix::hstack(&[&w_basis, &lift])?.inverse()?)?;
        if !c.is_invertible() {
            return Err(Error::StructuralInsertion(
                "reconstructed node gluing is singular".into(),
            ));
        }

        let mut degrees = chain.degrees().to_vec();
        degrees[r - 1] = pres_down.degree;
        degrees.push(dd);
        let mut gluings = chain.gluings().to_vec();
        let attach = if r == 1 {
            pres_up
                .t_left
                .mul(att.attach().expect("nonempty side carries an attach"))?
        } else {
            let toward_base = gluings.pop().expect("r ≥ 2 keeps an interior gluing");
            gluings.push(pres_up.t_left.mul(&toward_base)?);
            att.attach().expect("nonempty side carries an attach").clone()
        };
        gluings.push(c);
        let new_chain = ChainBundle::new(n, degrees, gluings)?;
        let new_side = AttachedChain::new(new_chain, Some(attach))?;

        let sigma = Matrix::hstack(&[
            &incl_f(n, dd).mul(&a_prime)?,
            &incl_g(n, dd).mul(&iota_g)?,
        ])?;
        let u = sigma.mul(&pres_up.t_right)?;
        let phi = match side {
            Side::One => d.phi().mul(&u.inverse()?)?,
            Side::Two => u.mul(d.phi())?,
        };
        replace_side(d, side, new_side, phi)
            .map_err(|e| Error::StructuralInsertion(format!("inserted datum rejected: {e}")))?
    };

    // contracting again must return exactly what we were given
    let (back_datum, back_bf) = contract_step(&outcome_datum, side, dd)?;
    if &back_datum != d || back_bf != b_used {
        return Err(Error::InternalFault(
            "insertion is not inverted by contraction".into(),
        ));
    }
    Ok(InsertOutcome {
        datum: outcome_datum,
        source_change,
    })
}

/// The full forward construction: contract side 1 at thresholds
/// n−i+1 for stages i = n..1 (recording the stage bf-morphisms), then
/// side 2 likewise; the middle isomorphism is the datum's phi in the
/// original endpoint coordinates.
pub fn gvbd_to_gi(d: &GiesekerDatum) -> Result<GeneralizedIsomorphism> {
    let n = d.rank();
    if !d.admissible_pair() {
        return Err(Error::Invalid("datum is not an admissible pair".into()));
    }
    let stages = |side: Side| -> Result<Vec<BfMorphism>> {
        let mut cur = d.clone();
        let mut out = Vec::with_capacity(n);
        for i in (1..=n).rev() {
            let (next, bf) = contract_step(&cur, side, n - i + 1)?;
            cur = next;
            out.push(bf);
        }
        out.reverse();
        Ok(out)
    };
    let e_stages = stages(Side::One)?;
    let f_stages = stages(Side::Two)?;
    let gi = GeneralizedIsomorphism {
        n,
        e_stages,
        f_stages,
        phi: d.phi().clone(),
    };
    let violations = validate_gi(&gi);
    if !violations.is_empty() {
        return Err(Error::InternalFault(format!(
            "forward construction produced an invalid generalized isomorphism: {}",
            violations.join("; ")
        )));
    }
    if gi.mu_zero_indices().len() != d.side(Side::One).len()
        || gi.lambda_zero_indices().len() != d.side(Side::Two).len()
    {
        return Err(Error::InternalFault(
            "vanishing counts do not match the chain lengths".into(),
        ));
    }
    Ok(gi)
}

/// The full backward construction: starting from the empty datum on the
/// base fibers E_0 and F_0, insert along the F-stages (side 2) and then
/// the E-stages (side 1), assembling phi from the stage-n identifications.
pub fn gi_to_gvbd(gi: &GeneralizedIsomorphism) -> Result<GiesekerDatum> {
    let violations = validate_gi(gi);
    if !violations.is_empty() {
        return Err(Error::Invalid(violations.join("; ")));
    }
    let n = gi.n;
    let mut cur = GiesekerDatum::empty(n, Matrix::identity(n))?;
    let mut iota_e = Matrix::identity(n);
    let mut iota_f = Matrix::identity(n);

    for (side, stages, iota) in [
        (Side::Two, &gi.f_stages, &mut iota_f),
        (Side::One, &gi.e_stages, &mut iota_e),
    ] {
        for (idx, stage) in stages.iter().enumerate() {
            let transported = BfMorphism {
                n,
                mu: stage.mu.clone(),
                f: iota.inverse()?.mul(&stage.f)?,
                g: stage.g.mul(iota)?,
                bf_rank: stage.bf_rank,
            };
            if stage.mu.is_zero() {
                let outcome = insert_step(&cur, side, &transported, idx + 1)?;
                cur = outcome.datum;
                *iota = outcome.source_change.inverse()?;
            } else {
                // unit stage: the endpoint identification moves by μ⁻¹·f
                *iota = transported
                    .f
                    .scale(&(rat_int(1) / stage.mu.clone()))
                    .inverse()?;
            }
        }
    }

    let phi = iota_f.inverse()?.mul(&gi.phi)?.mul(&iota_e)?;
    let datum = GiesekerDatum::new(
        n,
        cur.side(Side::One).clone(),
        cur.side(Side::Two).clone(),
        phi,
    )
    .map_err(|e| Error::StructuralInsertion(format!("assembled datum rejected: {e}")))?;
    Ok(datum)
}

/// Invariant fingerprint of a datum/generalized-isomorphism pair.
#[derive(Clone, Debug, Serialize)]
pub struct Fingerprint {
    pub deg1: Vec<usize>,
    pub deg2: Vec<usize>,
    pub mu_zeros: Vec<usize>,
    pub lambda_zeros: Vec<usize>,
    #[serde(rename = "dimQ")]
    pub dim_q: usize,
    #[serde(rename = "rank_compE")]
    pub rank_comp_e: usize,
    #[serde(rename = "rank_compF")]
    pub rank_comp_f: usize,
}

/// Round-trip report: the equivalence verdict plus the fingerprint.
#[derive(Clone, Debug, Serialize)]
pub struct RoundtripReport {
    pub ok: bool,
    pub fingerprint: Fingerprint,
}

fn fingerprint(d: &GiesekerDatum, gi: &GeneralizedIsomorphism) -> Result<Fingerprint> {
    let comps = composite_maps(gi);
    let point = grassmannian_point(gi)?;
    Ok(Fingerprint {
        deg1: d.side(Side::One).chain().degrees().to_vec(),
        deg2: d.side(Side::Two).chain().degrees().to_vec(),
        mu_zeros: gi.mu_zero_indices(),
        lambda_zeros: gi.lambda_zero_indices(),
        dim_q: point.dim_q,
        rank_comp_e: comps.comp_e.rank(),
        rank_comp_f: comps.comp_f.rank(),
    })
}

/// Round trip starting from a datum: convert to a generalized isomorphism
/// and back; the result must be equivalent to the input.
pub fn roundtrip_check_datum(
    d: &GiesekerDatum,
    draws: usize,
    seed: u64,
) -> Result<RoundtripReport> {
    let gi = gvbd_to_gi(d)?;
    let back = gi_to_gvbd(&gi)?;
    let ok = datum_equivalent(&back, d, draws, seed)?;
    Ok(RoundtripReport {
        ok,
        fingerprint: fingerprint(d, &gi)?,
    })
}

/// Round trip starting from a generalized isomorphism.
pub fn roundtrip_check_gi(
    gi: &GeneralizedIsomorphism,
    draws: usize,
    seed: u64,
) -> Result<RoundtripReport> {
    let datum = gi_to_gvbd(gi)?;
    let forward = gvbd_to_gi(&datum)?;
    let ok = crate::geniso::gi_equivalent(&forward, gi, draws, seed)?;
    Ok(RoundtripReport {
        ok,
        fingerprint: fingerprint(&datum, gi)?,
    })
}
