//! Inverting double extensions: peeling a one-dimensional central ideal
//! (even `rho`) or a mixed-parity plane (odd `rho`) off a flat quadratic
//! quasi-Frobenius structure, recovering the base and the extension data,
//! and certifying the round trip with an explicit isomorphism.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::liesuper::{perp, LieSuperalgebra, Subspace};
use crate::matrix::{rational_roots, Mat};
use crate::report::ValidationReport;
use crate::scalar::{self, Scalar};
use crate::structures::{Flavor, ProductTable, Qqf, QuasiFrobenius};
use crate::superlinalg::{
    adjoint, solve_against_form, BilinearForm, Endomorphism, Parity, Space, SuperSpace,
    SuperVector, Symmetry,
};

use super::planar::{planar_qqf_extend, PlanarExtensionData};
use super::{qqf_double_extend, ExtensionData, ExtensionKind, Isomorphism};

/// A certified inversion of a one-dimensional double extension.
#[derive(Debug)]
pub struct CentralReduction {
    pub kind: ExtensionKind,
    pub base: Qqf,
    pub data: ExtensionData,
    /// the base re-extended by `data`; isomorphic to the input
    pub reconstruction: Qqf,
    /// maps the reconstruction onto the input structure
    pub witness: Isomorphism,
}

/// A certified inversion of a planar double extension.
#[derive(Debug)]
pub struct PlanarReduction {
    pub base: Qqf,
    pub data: PlanarExtensionData,
    pub reconstruction: Qqf,
    pub witness: Isomorphism,
}

#[derive(Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Reduction {
    Central(CentralReduction),
    Planar(PlanarReduction),
}

/// Inverts one double-extension step, dispatching on the parity of `rho`:
/// even `rho` peels a central line, odd `rho` peels a mixed-parity plane.
pub fn reduce(g: &Qqf) -> Result<Reduction> {
    match g.rho().parity() {
        Parity::Even => central_reduce(g).map(Reduction::Central),
        Parity::Odd => planar_reduce(g).map(Reduction::Planar),
    }
}

/// A frame `[base vectors..., special vectors...]` of the ambient space
/// together with the inverse change of basis, for reading off coordinates.
struct Frame {
    minv: Mat,
    base_dim: usize,
    base_space: Space,
}

impl Frame {
    fn new(space: &Space, base: &[SuperVector], specials: &[SuperVector]) -> Result<Frame> {
        let n = space.dim();
        if base.len() + specials.len() != n {
            return Err(Error::DimensionMismatch(
                "frame does not span the space".into(),
            ));
        }
        let mut m = Mat::zeros(n, n);
        for (c, v) in base.iter().chain(specials.iter()).enumerate() {
            for r in 0..n {
                m.set(r, c, v.coeff(r).clone());
            }
        }
        let minv = m
            .inverse()
            .ok_or_else(|| Error::Invalid("reduction frame is not a basis".into()))?;
        let basis = base
            .iter()
            .enumerate()
            .map(|(i, v)| (format!("u{i}"), v.parity_or(Parity::Even).unwrap()))
            .collect();
        Ok(Frame {
            minv,
            base_dim: base.len(),
            base_space: SuperSpace::new(basis)?,
        })
    }

    fn coords(&self, v: &SuperVector) -> Vec<Scalar> {
        self.minv.mul_vec(v.coeffs())
    }

    /// base-space component of `v`
    fn base_part(&self, v: &SuperVector) -> SuperVector {
        let coords = self.coords(v);
        SuperVector::from_coeffs(&self.base_space, coords[..self.base_dim].to_vec()).unwrap()
    }

    /// coefficient of the k-th special vector in `v`
    fn special_coeff(&self, v: &SuperVector, k: usize) -> Scalar {
        self.coords(v)[self.base_dim + k].clone()
    }

    /// fails unless the k-th special coefficient of `v` is `expected`
    fn expect_special(
        &self,
        v: &SuperVector,
        k: usize,
        expected: &Scalar,
        what: &str,
    ) -> Result<()> {
        let got = self.special_coeff(v, k);
        if &got != expected {
            return Err(Error::Invalid(format!(
                "{what}: expected coefficient {}, found {}",
                scalar::format(expected),
                scalar::format(&got)
            )));
        }
        Ok(())
    }
}

/// Echelon basis of the parity component of a list of spanning vectors.
fn parity_component(space: &Space, vectors: &[SuperVector], p: Parity) -> Vec<SuperVector> {
    let projected: Vec<SuperVector> = vectors.iter().map(|v| v.component(p)).collect();
    Subspace::from_vectors(space, projected).basis().to_vec()
}

/// Matrix of a map restricted to the span of `vectors`, given the images;
/// `None` when an image leaves the span.
fn restriction_matrix(
    space: &Space,
    vectors: &[SuperVector],
    images: &[SuperVector],
) -> Option<Mat> {
    let n = space.dim();
    let k = vectors.len();
    let mut m = Mat::zeros(n, k);
    for (c, v) in vectors.iter().enumerate() {
        for r in 0..n {
            m.set(r, c, v.coeff(r).clone());
        }
    }
    let mut out = Mat::zeros(k, k);
    for (c, im) in images.iter().enumerate() {
        let x = m.solve_particular(im.coeffs())?;
        for (r, v) in x.iter().enumerate() {
            out.set(r, c, v.clone());
        }
    }
    Some(out)
}

/// Nonzero rational eigenvalues of a square matrix, ascending.
fn nonzero_eigenvalues(m: &Mat) -> Vec<Scalar> {
    let mut roots = rational_roots(&m.char_poly());
    roots.sort();
    roots.dedup();
    roots.retain(|r| !r.is_zero());
    roots
}

/// First echelon kernel vector of `m - lambda`, expressed back in the
/// ambient space through `vectors`.
fn eigenvector(
    m: &Mat,
    lambda: &Scalar,
    space: &Space,
    vectors: &[SuperVector],
) -> Option<SuperVector> {
    let k = m.nrows();
    let mut shifted = m.clone();
    for i in 0..k {
        let v = shifted.get(i, i) - lambda;
        shifted.set(i, i, v);
    }
    let kernel = shifted.kernel_basis();
    let coeffs = kernel.first()?;
    let mut acc = SuperVector::zero(space);
    for (c, v) in coeffs.iter().zip(vectors.iter()) {
        acc = &acc + &v.scale(c);
    }
    Some(acc)
}

/// First basis vector of parity `p` pairing nontrivially with `e` on the
/// left, rescaled so that `omega(e, d) = 1`.
fn dual_partner(omega: &BilinearForm, e: &SuperVector, p: Parity) -> Result<SuperVector> {
    let space = omega.space();
    for j in 0..space.dim() {
        if space.parity(j) != p {
            continue;
        }
        let cand = SuperVector::basis(space, j);
        let pairing = omega.eval(e, &cand)?;
        if !pairing.is_zero() {
            return Ok(cand.scale(&(scalar::one() / pairing)));
        }
    }
    Err(Error::DegeneratePair(
        "no dual partner pairs with the central vector".into(),
    ))
}

/// Graded echelon basis (evens first) of the orthogonal complement of the
/// special vectors.
fn orthogonal_base(omega: &BilinearForm, specials: &[SuperVector]) -> Result<Vec<SuperVector>> {
    let space = omega.space();
    let sub = Subspace::from_vectors(space, specials.to_vec());
    if sub.dim() != specials.len() {
        return Err(Error::DegeneratePair(
            "special vectors are linearly dependent".into(),
        ));
    }
    let complement = perp(&sub, omega)?;
    let mut basis = parity_component(space, complement.basis(), Parity::Even);
    basis.extend(parity_component(space, complement.basis(), Parity::Odd));
    if basis.len() != space.dim() - specials.len() {
        return Err(Error::DegeneratePair(
            "orthogonal complement is not graded of the right dimension".into(),
        ));
    }
    Ok(basis)
}

/// Restriction of a form to the frame's base, as a form on the base space.
fn restrict_form(form: &BilinearForm, frame: &Frame, base: &[SuperVector]) -> Result<BilinearForm> {
    let k = base.len();
    let mut entries: Vec<(String, String, Scalar)> = Vec::new();
    for i in 0..k {
        for j in 0..k {
            let v = form.eval(&base[i], &base[j])?;
            if !v.is_zero() {
                entries.push((
                    frame.base_space.label(i).to_string(),
                    frame.base_space.label(j).to_string(),
                    v,
                ));
            }
        }
    }
    let refs: Vec<(&str, &str, Scalar)> = entries
        .iter()
        .map(|(l, r, v)| (l.as_str(), r.as_str(), v.clone()))
        .collect();
    BilinearForm::from_entries(
        &frame.base_space,
        form.parity(),
        Symmetry::Antisymmetric,
        &refs,
    )
}

/// Base Lie superalgebra read off through the frame; every bracket of base
/// vectors must stay inside base + specials-span with zero coefficients on
/// the listed non-ideal specials (`forbidden`).
fn restrict_brackets(
    g: &Qqf,
    frame: &Frame,
    base: &[SuperVector],
    forbidden: &[usize],
) -> Result<LieSuperalgebra> {
    let k = base.len();
    let mut entries: Vec<((usize, usize), SuperVector)> = Vec::new();
    for i in 0..k {
        for j in i..k {
            let br = g.alg().bracket(&base[i], &base[j])?;
            for &f in forbidden {
                frame.expect_special(
                    &br,
                    f,
                    &scalar::zero(),
                    "base bracket leaves the coisotropic subalgebra",
                )?;
            }
            let part = frame.base_part(&br);
            if !part.is_zero() {
                entries.push(((i, j), part));
            }
        }
    }
    LieSuperalgebra::new(
        &format!("red({})", g.alg().name()),
        &frame.base_space,
        entries,
    )
}

/// Base `rho` read off through the frame (d-coefficients must vanish).
fn restrict_rho(
    g: &Qqf,
    frame: &Frame,
    base: &[SuperVector],
    forbidden: &[usize],
) -> Result<Endomorphism> {
    let images: Vec<SuperVector> = base
        .iter()
        .map(|v| g.rho().apply(v))
        .collect::<Result<_>>()?;
    for im in &images {
        for &f in forbidden {
            frame.expect_special(
                im,
                f,
                &scalar::zero(),
                "rho does not preserve the coisotropic subalgebra",
            )?;
        }
    }
    Endomorphism::from_action(&frame.base_space, g.rho().parity(), |i| {
        frame.base_part(&images[i])
    })
}

/// `b0`-style vector: solves `omega_b(x, u_k) = rhs_k` over the base.
fn from_pairings(omega_b: &BilinearForm, rhs: Vec<Scalar>) -> Result<SuperVector> {
    solve_against_form(omega_b, &rhs)
}

fn attempt_central(
    g: &Qqf,
    star: &ProductTable,
    lambda: &Scalar,
    e: &SuperVector,
) -> Result<CentralReduction> {
    let space = g.space();
    let omega = g.omega();
    let flavor = g.qf().flavor();
    let e_parity = e.parity_or(Parity::Even)?;
    let kind = ExtensionKind::from_flavor_and_e(flavor, e_parity);

    if !omega.eval(e, e)?.is_zero() {
        return Err(Error::DegeneratePair(
            "central eigenvector is not isotropic".into(),
        ));
    }
    let mut d = dual_partner(omega, e, kind.xi_parity())?;
    if kind == ExtensionKind::OddOrtho {
        // omega(e, d) = omega(d, e) = 1 here, so shifting by a multiple of
        // e clears the self-pairing
        let half = omega.eval(&d, &d)? / scalar::int(2);
        d = &d - &e.scale(&half);
    }

    let base = orthogonal_base(omega, &[e.clone(), d.clone()])?;
    let frame = Frame::new(space, &base, &[d.clone(), e.clone()])?;
    const D: usize = 0;
    const E: usize = 1;

    // xi(u) = base component of u * d
    let xi_images: Vec<SuperVector> = base
        .iter()
        .map(|u| {
            let p = star.product(u, &d)?;
            frame.expect_special(&p, D, &scalar::zero(), "u * d has a d component")?;
            Ok(frame.base_part(&p))
        })
        .collect::<Result<_>>()?;
    let xi = Endomorphism::from_action(&frame.base_space, kind.xi_parity(), |i| {
        xi_images[i].clone()
    })?;

    let omega_b = restrict_form(omega, &frame, &base)?;

    // omega_b(b0, u) = e-coefficient of [d, u]
    let b0_rhs: Vec<Scalar> = base
        .iter()
        .map(|u| {
            let br = g.alg().bracket(&d, u)?;
            frame.expect_special(&br, D, &scalar::zero(), "[d, u] has a d component")?;
            Ok(frame.special_coeff(&br, E))
        })
        .collect::<Result<_>>()?;
    let b0 = from_pairings(&omega_b, b0_rhs)?;

    // rho(d) = (t e) + sign a - lambda d
    let rho_d = g.rho().apply(&d)?;
    frame.expect_special(&rho_d, D, &(-lambda.clone()), "rho(d) d-coefficient")?;
    let a_sign = if kind == ExtensionKind::OddOrtho {
        -scalar::one()
    } else {
        scalar::one()
    };
    let a = frame.base_part(&rho_d).scale(&a_sign);
    let t = match flavor {
        Flavor::Orthosymplectic => frame.special_coeff(&rho_d, E),
        Flavor::Periplectic => {
            frame.expect_special(&rho_d, E, &scalar::zero(), "rho(d) e-coefficient")?;
            scalar::zero()
        }
    };

    let alg_b = restrict_brackets(g, &frame, &base, &[D])?;
    let rho_b = restrict_rho(g, &frame, &base, &[D])?;
    let qf_b = QuasiFrobenius::new(omega_b)?;
    let base_qqf = Qqf::from_rho(alg_b, qf_b, &rho_b)?;

    let data = ExtensionData::quadratic(xi, b0, a, lambda.clone(), t);
    let reconstruction = qqf_double_extend(kind, &base_qqf, &data)?;

    let witness = witness_map(&reconstruction, g, &frame, &base, &[("d", &d), ("e", e)])?;
    Ok(CentralReduction {
        kind,
        base: base_qqf,
        data,
        reconstruction,
        witness,
    })
}

/// Builds and certifies the isomorphism from the reconstruction onto the
/// original structure (base labels map to the frame vectors, adjoined
/// labels to the listed specials).
fn witness_map(
    reconstruction: &Qqf,
    g: &Qqf,
    frame: &Frame,
    base: &[SuperVector],
    specials: &[(&str, &SuperVector)],
) -> Result<Isomorphism> {
    let rspace = reconstruction.space();
    let images: Vec<SuperVector> = (0..rspace.dim())
        .map(|k| {
            let label = rspace.label(k);
            if let Some((_, v)) = specials.iter().find(|(l, _)| *l == label) {
                Ok((*v).clone())
            } else {
                let i = frame.base_space.index_of(label)?;
                Ok(base[i].clone())
            }
        })
        .collect::<Result<_>>()?;
    let witness = Isomorphism::new(rspace, g.space(), images)?;
    if !witness.is_qqf_isomorphism(reconstruction, g) {
        return Err(Error::Invalid(
            "reduction round trip is not an isomorphism".into(),
        ));
    }
    Ok(witness)
}

/// Peels a one-dimensional double extension off a structure with even
/// `rho`: locates a central `rho`-eigenvector with nonzero rational
/// eigenvalue, recovers base and extension data, and certifies the round
/// trip. Candidates are tried deterministically: even central vectors
/// first, eigenvalues ascending.
pub fn central_reduce(g: &Qqf) -> Result<CentralReduction> {
    if g.rho().parity() != Parity::Even {
        return Err(Error::Invalid(
            "central reduction needs an even rho; use the planar reduction".into(),
        ));
    }
    let star = g.natural_product()?;
    let space = g.space();
    let center = g.alg().center();
    if center.dim() == 0 {
        return Err(Error::NoCenter);
    }

    let mut saw_eigenvalue = false;
    let mut first_failure: Option<Error> = None;
    for parity in [Parity::Even, Parity::Odd] {
        let zvecs = parity_component(space, center.basis(), parity);
        if zvecs.is_empty() {
            continue;
        }
        let images: Vec<SuperVector> = zvecs
            .iter()
            .map(|z| g.rho().apply(z))
            .collect::<Result<_>>()?;
        let Some(r) = restriction_matrix(space, &zvecs, &images) else {
            continue; // rho moves this central component off itself
        };
        for lambda in nonzero_eigenvalues(&r) {
            let Some(e) = eigenvector(&r, &lambda, space, &zvecs) else {
                continue;
            };
            saw_eigenvalue = true;
            match attempt_central(g, &star, &lambda, &e) {
                Ok(red) => return Ok(red),
                Err(err) => {
                    first_failure.get_or_insert(err);
                }
            }
        }
    }
    if let Some(err) = first_failure {
        return Err(err);
    }
    if saw_eigenvalue {
        unreachable!("every eigenvalue either reduces or records a failure");
    }
    Err(Error::NoRationalEigenvalue(
        "no central rho-eigenvector with nonzero rational eigenvalue".into(),
    ))
}

fn attempt_planar(
    g: &Qqf,
    star: &ProductTable,
    lambda: &Scalar,
    e0: &SuperVector,
) -> Result<PlanarReduction> {
    let space = g.space();
    let omega = g.omega();
    let flavor = g.qf().flavor();
    let e1 = g.rho().apply(e0)?.scale(&(scalar::one() / lambda.clone()));

    for (l, r) in [(e0, e0), (e0, &e1), (&e1, e0), (&e1, &e1)] {
        if !omega.eval(l, r)?.is_zero() {
            return Err(Error::DegeneratePair(
                "central plane is not isotropic".into(),
            ));
        }
    }

    // duals: the even d0 pairs with the e of opposite-to-omega parity,
    // the odd d1 with the other one
    let (e_for_d0, e_for_d1) = match flavor {
        Flavor::Orthosymplectic => (e0, &e1),
        Flavor::Periplectic => (&e1, e0),
    };
    let mut d0 = dual_partner(omega, e_for_d0, Parity::Even)?;
    let mut d1 = dual_partner(omega, e_for_d1, Parity::Odd)?;
    match flavor {
        Flavor::Orthosymplectic => {
            // omega(e1, d1) = omega(d1, e1) = 1: clear the self-pairing
            let half = omega.eval(&d1, &d1)? / scalar::int(2);
            d1 = &d1 - &e1.scale(&half);
        }
        Flavor::Periplectic => {
            // omega(e0, d1) = 1: clear the cross-pairing
            let cross = omega.eval(&d0, &d1)?;
            d0 = &d0 - &e0.scale(&cross);
        }
    }

    let specials = [d0.clone(), d1.clone(), e0.clone(), e1.clone()];
    let base = orthogonal_base(omega, &specials)?;
    let frame = Frame::new(space, &base, &specials)?;
    const D0: usize = 0;
    const D1: usize = 1;
    const E0: usize = 2;
    const E1: usize = 3;

    // xi_i(u) = base component of u * d_i
    let mut xi_images = [Vec::new(), Vec::new()];
    for (slot, d) in [(0usize, &d0), (1usize, &d1)] {
        for u in &base {
            let p = star.product(u, d)?;
            for f in [D0, D1] {
                frame.expect_special(&p, f, &scalar::zero(), "u * d has a d component")?;
            }
            xi_images[slot].push(frame.base_part(&p));
        }
    }
    let mut xi0 =
        Endomorphism::from_action(&frame.base_space, Parity::Even, |i| xi_images[0][i].clone())?;
    let mut xi1 =
        Endomorphism::from_action(&frame.base_space, Parity::Odd, |i| xi_images[1][i].clone())?;

    let omega_b = restrict_form(omega, &frame, &base)?;
    if flavor == Flavor::Periplectic {
        // over a periplectic base the product rows carry the adjoints:
        // u * d_i = xi_i*(u), so undo the adjoint to recover the data
        xi0 = adjoint(&xi0, &omega_b)?;
        xi1 = adjoint(&xi1, &omega_b)?;
    }

    // [d0, u] pairs against (b0, b1); [d1, u] against (c0, c1)
    let mut pairings = [Vec::new(), Vec::new(), Vec::new(), Vec::new()];
    for (d, slots) in [(&d0, [0usize, 1]), (&d1, [2usize, 3])] {
        for u in &base {
            let br = g.alg().bracket(d, u)?;
            for f in [D0, D1] {
                frame.expect_special(&br, f, &scalar::zero(), "[d, u] has a d component")?;
            }
            pairings[slots[0]].push(frame.special_coeff(&br, E0));
            pairings[slots[1]].push(frame.special_coeff(&br, E1));
        }
    }
    let b0 = from_pairings(&omega_b, pairings[0].clone())?;
    let b1 = from_pairings(&omega_b, pairings[1].clone())?;
    let c0 = from_pairings(&omega_b, pairings[2].clone())?;
    let c1 = from_pairings(&omega_b, pairings[3].clone())?;

    // T from the e1 coefficient of [d0, d1]
    let d0d1 = g.alg().bracket(&d0, &d1)?;
    let t_cap = frame.special_coeff(&d0d1, E1);

    // rho on the adjoined plane
    let rho_d0 = g.rho().apply(&d0)?;
    let rho_d1 = g.rho().apply(&d1)?;
    let (a0, a1, t) = match flavor {
        Flavor::Orthosymplectic => {
            // rho(d1) = a0 + t e0 - lambda d0; rho(d0) = a1 + t e1 + lambda d1
            frame.expect_special(&rho_d1, D0, &(-lambda.clone()), "rho(d1) d0-coefficient")?;
            frame.expect_special(&rho_d0, D1, lambda, "rho(d0) d1-coefficient")?;
            let t = frame.special_coeff(&rho_d1, E0);
            (frame.base_part(&rho_d1), frame.base_part(&rho_d0), t)
        }
        Flavor::Periplectic => {
            // rho(d0) = t e1 + a1 - lambda d1; rho(d1) = a0 + lambda d0
            frame.expect_special(&rho_d0, D1, &(-lambda.clone()), "rho(d0) d1-coefficient")?;
            frame.expect_special(&rho_d1, D0, lambda, "rho(d1) d0-coefficient")?;
            let t = frame.special_coeff(&rho_d0, E1);
            (frame.base_part(&rho_d1), frame.base_part(&rho_d0), t)
        }
    };

    let alg_b = restrict_brackets(g, &frame, &base, &[D0, D1])?;
    let rho_b = restrict_rho(g, &frame, &base, &[D0, D1])?;
    let qf_b = QuasiFrobenius::new(omega_b)?;
    let base_qqf = Qqf::from_rho(alg_b, qf_b, &rho_b)?;

    let data = PlanarExtensionData::symplectic(xi0, xi1, b0, b1, c0, c1, t_cap).with_rho_data(
        a0,
        a1,
        lambda.clone(),
        t,
    );
    let reconstruction = planar_qqf_extend(&base_qqf, &data)?;

    let witness = witness_map(
        &reconstruction,
        g,
        &frame,
        &base,
        &[("d0", &d0), ("d1", &d1), ("e0", e0), ("e1", &e1)],
    )?;
    Ok(PlanarReduction {
        base: base_qqf,
        data,
        reconstruction,
        witness,
    })
}

/// Peels a planar double extension off a structure with odd `rho`: locates
/// an even central vector `e0` with `rho^2 e0 = lambda^2 e0` for a nonzero
/// rational `lambda`, sets `e1 = rho(e0) / lambda`, recovers base and
/// planar data, and certifies the round trip.
pub fn planar_reduce(g: &Qqf) -> Result<PlanarReduction> {
    if g.rho().parity() != Parity::Odd {
        return Err(Error::Invalid(
            "planar reduction needs an odd rho; use the central reduction".into(),
        ));
    }
    let star = g.natural_product()?;
    let space = g.space();
    let center = g.alg().center();
    if center.dim() == 0 {
        return Err(Error::NoCenter);
    }

    let zvecs = parity_component(space, center.basis(), Parity::Even);
    if zvecs.is_empty() {
        return Err(Error::NoCenter);
    }
    let images: Vec<SuperVector> = zvecs
        .iter()
        .map(|z| g.rho().apply(&g.rho().apply(z)?))
        .collect::<Result<_>>()?;
    let r = restriction_matrix(space, &zvecs, &images).ok_or(Error::NoCenter)?;

    let mut saw_candidate = false;
    let mut first_failure: Option<Error> = None;
    for mu in nonzero_eigenvalues(&r) {
        let Some(lambda) = scalar::sqrt(&mu) else {
            continue;
        };
        let Some(e0) = eigenvector(&r, &mu, space, &zvecs) else {
            continue;
        };
        saw_candidate = true;
        match attempt_planar(g, &star, &lambda, &e0) {
            Ok(red) => return Ok(red),
            Err(err) => {
                first_failure.get_or_insert(err);
            }
        }
    }
    if let Some(err) = first_failure {
        return Err(err);
    }
    if saw_candidate {
        unreachable!("every candidate either reduces or records a failure");
    }
    Err(Error::NoRationalEigenvalue(
        "rho^2 has no central eigenvector with a nonzero rational square eigenvalue".into(),
    ))
}

/// Iterates `reduce` to exhaustion, returning the chain of reductions from
/// the input down to a structure that no longer reduces (for a flat
/// structure with odd `rho` this ends at dimension zero).
pub fn reduce_chain(g: &Qqf) -> (Vec<Reduction>, Qqf) {
    let mut chain = Vec::new();
    let mut current = g.clone();
    loop {
        match reduce(&current) {
            Ok(step) => {
                let next = match &step {
                    Reduction::Central(r) => r.base.clone(),
                    Reduction::Planar(r) => r.base.clone(),
                };
                chain.push(step);
                current = next;
            }
            Err(_) => return (chain, current),
        }
    }
}

/// Convenience report wrapper used by callers that only want a verdict.
pub fn reduction_report(g: &Qqf) -> ValidationReport {
    let mut report = ValidationReport::new();
    match reduce(g) {
        Ok(_) => {}
        Err(Error::Hypothesis(inner)) => report.merge(inner),
        Err(err) => report.fail("reduce", err.to_string()),
    }
    report
}
