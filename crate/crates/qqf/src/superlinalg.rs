//! Graded linear algebra over exact rationals: superspaces, homogeneous
//! vectors, endomorphisms, bilinear forms, dual pairings, wedge/symmetric
//! products, upsetting and adjoints. Every Koszul sign in the crate is
//! produced here.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::scalar::{self, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    /// The Koszul sign (-1)^{|a||b|}.
    pub fn koszul(self, other: Parity) -> Scalar {
        if self == Parity::Odd && other == Parity::Odd {
            -scalar::one()
        } else {
            scalar::one()
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn from_str(s: &str) -> Result<Parity> {
        match s {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            _ => Err(Error::Invalid(format!("unknown parity `{s}`"))),
        }
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An ordered homogeneous basis with parities. Canonical ordering puts all
/// even basis vectors before all odd ones; the constructor reorders its
/// input and records where each canonical slot came from.
#[derive(Debug, PartialEq, Eq)]
pub struct SuperSpace {
    labels: Vec<String>,
    parities: Vec<Parity>,
    /// canonical index -> position in the constructor input
    source_positions: Vec<usize>,
}

pub type Space = Arc<SuperSpace>;

impl SuperSpace {
    pub fn new(basis: Vec<(String, Parity)>) -> Result<Space> {
        let mut order: Vec<usize> = (0..basis.len()).collect();
        order.sort_by_key(|&i| basis[i].1); // stable: even first
        let mut labels = Vec::with_capacity(basis.len());
        let mut parities = Vec::with_capacity(basis.len());
        for &i in &order {
            let (label, parity) = &basis[i];
            if labels.contains(label) {
                return Err(Error::Invalid(format!("duplicate basis label `{label}`")));
            }
            labels.push(label.clone());
            parities.push(*parity);
        }
        Ok(Arc::new(SuperSpace {
            labels,
            parities,
            source_positions: order,
        }))
    }

    pub fn trivial() -> Space {
        SuperSpace::new(Vec::new()).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn even_dim(&self) -> usize {
        self.parities.iter().filter(|&&p| p == Parity::Even).count()
    }

    pub fn odd_dim(&self) -> usize {
        self.dim() - self.even_dim()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.parities[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::Invalid(format!("unknown basis label `{label}`")))
    }

    pub fn source_positions(&self) -> &[usize] {
        &self.source_positions
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &str, Parity)> {
        (0..self.dim()).map(move |i| (i, self.label(i), self.parity(i)))
    }
}

fn same_space(a: &Space, b: &Space) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(
            "operands live in different superspaces".into(),
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperVector {
    space: Space,
    coeffs: Vec<Scalar>,
}

impl SuperVector {
    pub fn zero(space: &Space) -> Self {
        SuperVector {
            space: space.clone(),
            coeffs: vec![scalar::zero(); space.dim()],
        }
    }

    pub fn basis(space: &Space, i: usize) -> Self {
        let mut v = Self::zero(space);
        v.coeffs[i] = scalar::one();
        v
    }

    pub fn from_coeffs(space: &Space, coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.len() != space.dim() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} coefficients, got {}",
                space.dim(),
                coeffs.len()
            )));
        }
        Ok(SuperVector {
            space: space.clone(),
            coeffs,
        })
    }

    pub fn from_entries(space: &Space, entries: &[(&str, Scalar)]) -> Result<Self> {
        let mut v = Self::zero(space);
        for (label, c) in entries {
            let i = space.index_of(label)?;
            v.coeffs[i] = v.coeffs[i].clone() + c;
        }
        Ok(v)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn coeff(&self, i: usize) -> &Scalar {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Parity of a homogeneous nonzero vector; `None` for the zero vector
    /// (homogeneous of every parity) and an error for mixed vectors.
    pub fn parity(&self) -> Result<Option<Parity>> {
        let mut found = None;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = self.space.parity(i);
            match found {
                None => found = Some(p),
                Some(q) if q != p => {
                    return Err(Error::Homogeneity(format!("vector {self} mixes parities")))
                }
                _ => {}
            }
        }
        Ok(found)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.parity().is_ok()
    }

    /// Parity for sign computations, defaulting the zero vector to `fallback`.
    pub fn parity_or(&self, fallback: Parity) -> Result<Parity> {
        Ok(self.parity()?.unwrap_or(fallback))
    }

    pub fn has_parity(&self, p: Parity) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| c.is_zero() || self.space.parity(i) == p)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        SuperVector {
            space: self.space.clone(),
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Projection onto one parity component.
    pub fn component(&self, p: Parity) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if self.space.parity(i) == p {
                    c.clone()
                } else {
                    scalar::zero()
                }
            })
            .collect();
        SuperVector {
            space: self.space.clone(),
            coeffs,
        }
    }
}

impl Add for &SuperVector {
    type Output = SuperVector;
    fn add(self, other: &SuperVector) -> SuperVector {
        same_space(&self.space, &other.space).expect("vector addition across spaces");
        SuperVector {
            space: self.space.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &SuperVector {
    type Output = SuperVector;
    fn sub(self, other: &SuperVector) -> SuperVector {
        self + &(-other)
    }
}

impl Neg for &SuperVector {
    type Output = SuperVector;
    fn neg(self) -> SuperVector {
        self.scale(&(-scalar::one()))
    }
}

impl fmt::Display for SuperVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{}*{}", scalar::format(c), self.space.label(i))?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A homogeneous covector: supported only on basis vectors of its parity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Covector {
    space: Space,
    parity: Parity,
    coeffs: Vec<Scalar>,
}

impl Covector {
    /// The dual `x*` of the basis vector labelled `label`.
    pub fn dual(space: &Space, label: &str) -> Result<Self> {
        let i = space.index_of(label)?;
        let mut coeffs = vec![scalar::zero(); space.dim()];
        coeffs[i] = scalar::one();
        Ok(Covector {
            space: space.clone(),
            parity: space.parity(i),
            coeffs,
        })
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn apply(&self, v: &SuperVector) -> Result<Scalar> {
        same_space(&self.space, &v.space)?;
        Ok(self
            .coeffs
            .iter()
            .zip(v.coeffs())
            .map(|(a, b)| a * b)
            .fold(scalar::zero(), |acc, x| acc + x))
    }
}

/// Pairing of dual tensors against tensors:
/// `<x* (x) y*, u (x) v> = (-1)^{|y||u|} x*(u) y*(v)`.
pub fn pair_dual(f: (&Covector, &Covector), w: (&SuperVector, &SuperVector)) -> Result<Scalar> {
    let (x, y) = f;
    let (u, v) = w;
    same_space(&x.space, &y.space)?;
    same_space(&x.space, u.space())?;
    let pu = u
        .parity()?
        .ok_or(())
        .or_else(|_| u.parity_or(Parity::Even))?;
    v.parity()?; // reject mixed v as well
    let sign = y.parity().koszul(pu);
    Ok(sign * x.apply(u)? * y.apply(v)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Symmetric,
    Antisymmetric,
    None,
}

impl Symmetry {
    pub fn as_str(self) -> &'static str {
        match self {
            Symmetry::Symmetric => "symmetric",
            Symmetry::Antisymmetric => "antisymmetric",
            Symmetry::None => "none",
        }
    }
}

/// A homogeneous bilinear form stored as the raw value table `B(b_i, b_j)`.
/// The parity-prefactored Gram matrix is a derived view, used only where the
/// block formula for upsetting needs it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearForm {
    space: Space,
    parity: Parity,
    symmetry: Symmetry,
    values: Mat,
}

impl BilinearForm {
    pub fn zero(space: &Space, parity: Parity, symmetry: Symmetry) -> Self {
        BilinearForm {
            space: space.clone(),
            parity,
            symmetry,
            values: Mat::zeros(space.dim(), space.dim()),
        }
    }

    /// Builds a form from raw entries and validates homogeneity plus the
    /// declared symmetry flag.
    pub fn from_entries(
        space: &Space,
        parity: Parity,
        symmetry: Symmetry,
        entries: &[(&str, &str, Scalar)],
    ) -> Result<Self> {
        let mut values = Mat::zeros(space.dim(), space.dim());
        for (l, r, v) in entries {
            let i = space.index_of(l)?;
            let j = space.index_of(r)?;
            if !values.get(i, j).is_zero() {
                return Err(Error::Invalid(format!("duplicate form entry ({l}, {r})")));
            }
            values.set(i, j, v.clone());
        }
        let form = BilinearForm {
            space: space.clone(),
            parity,
            symmetry,
            values,
        };
        form.validate()?;
        Ok(form)
    }

    fn from_values(space: &Space, parity: Parity, symmetry: Symmetry, values: Mat) -> Self {
        BilinearForm {
            space: space.clone(),
            parity,
            symmetry,
            values,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.space.dim();
        for i in 0..n {
            for j in 0..n {
                let v = self.values.get(i, j);
                if v.is_zero() {
                    continue;
                }
                if self.space.parity(i) + self.space.parity(j) != self.parity {
                    return Err(Error::Homogeneity(format!(
                        "form entry ({}, {}) violates parity {}",
                        self.space.label(i),
                        self.space.label(j),
                        self.parity
                    )));
                }
            }
        }
        let check = |expected_sign: i64| -> Result<()> {
            for i in 0..n {
                for j in 0..n {
                    let koszul = self.space.parity(i).koszul(self.space.parity(j));
                    let expected = scalar::int(expected_sign) * koszul * self.values.get(j, i);
                    if self.values.get(i, j) != &expected {
                        return Err(Error::Invalid(format!(
                            "form is not {} at ({}, {})",
                            self.symmetry.as_str(),
                            self.space.label(i),
                            self.space.label(j)
                        )));
                    }
                }
            }
            Ok(())
        };
        match self.symmetry {
            Symmetry::Symmetric => check(1),
            Symmetry::Antisymmetric => check(-1),
            Symmetry::None => Ok(()),
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn value(&self, i: usize, j: usize) -> &Scalar {
        self.values.get(i, j)
    }

    pub fn eval(&self, u: &SuperVector, v: &SuperVector) -> Result<Scalar> {
        same_space(&self.space, u.space())?;
        same_space(&self.space, v.space())?;
        let mut acc = scalar::zero();
        for (i, a) in u.coeffs().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in v.coeffs().iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                acc += a * b * self.values.get(i, j);
            }
        }
        Ok(acc)
    }

    pub fn add(&self, other: &BilinearForm) -> Result<BilinearForm> {
        same_space(&self.space, &other.space)?;
        if self.parity != other.parity {
            return Err(Error::Homogeneity(
                "cannot add forms of different parity".into(),
            ));
        }
        let symmetry = if self.symmetry == other.symmetry {
            self.symmetry
        } else {
            Symmetry::None
        };
        let n = self.space.dim();
        let mut values = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                values.set(i, j, self.values.get(i, j) + other.values.get(i, j));
            }
        }
        Ok(BilinearForm::from_values(
            &self.space,
            self.parity,
            symmetry,
            values,
        ))
    }

    pub fn scale(&self, s: &Scalar) -> BilinearForm {
        let n = self.space.dim();
        let mut values = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                values.set(i, j, self.values.get(i, j) * s);
            }
        }
        BilinearForm::from_values(&self.space, self.parity, self.symmetry, values)
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.values.det().is_zero()
    }

    /// The Gram matrix `G_ij = (-1)^{p(B) p(b_i)} B(b_i, b_j)`.
    pub fn gram(&self) -> Mat {
        let n = self.space.dim();
        let mut g = Mat::zeros(n, n);
        for i in 0..n {
            let sign = self.parity.koszul(self.space.parity(i));
            for j in 0..n {
                g.set(i, j, sign.clone() * self.values.get(i, j));
            }
        }
        g
    }

    /// Raw values matrix, used by solvers.
    pub fn raw(&self) -> &Mat {
        &self.values
    }
}

/// The upsetting `u(B)(w, v) = (-1)^{|v||w|} B(v, w)`, computed elementwise
/// on the raw table. The block-matrix route through the Gram view must agree
/// and is asserted on every call.
pub fn upsetting(form: &BilinearForm) -> BilinearForm {
    let space = form.space();
    let n = space.dim();
    let mut values = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let sign = space.parity(i).koszul(space.parity(j));
            values.set(i, j, sign * form.value(j, i));
        }
    }
    let result = BilinearForm::from_values(space, form.parity(), Symmetry::None, values);

    // Cross-check: push the Gram view through the block formula
    //   u(B) = [ R^t, (-1)^p T^t ; (-1)^p S^t, -U^t ]
    // and translate back to raw values.
    let g = form.gram();
    let even = space.even_dim();
    let p_sign = form.parity().koszul(Parity::Odd);
    let mut expected_gram = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let block_sign = match (i < even, j < even) {
                (true, true) => scalar::one(),
                (true, false) | (false, true) => p_sign.clone(),
                (false, false) => -scalar::one(),
            };
            expected_gram.set(i, j, block_sign * g.get(j, i));
        }
    }
    for i in 0..n {
        for j in 0..n {
            let sign = form.parity().koszul(space.parity(i));
            let expected = sign * expected_gram.get(i, j);
            assert_eq!(
                result.value(i, j),
                &expected,
                "upsetting raw/Gram routes disagree at ({i}, {j})"
            );
        }
    }
    result
}

fn graded_product_form(
    f: &Covector,
    g: &Covector,
    plus: bool,
    symmetry: Symmetry,
) -> Result<BilinearForm> {
    same_space(&f.space, &g.space)?;
    let space = f.space.clone();
    let n = space.dim();
    let parity = f.parity() + g.parity();
    let swap_sign = f.parity().koszul(g.parity());
    let mut values = Mat::zeros(n, n);
    for i in 0..n {
        let u = SuperVector::basis(&space, i);
        for j in 0..n {
            let v = SuperVector::basis(&space, j);
            let direct = pair_dual((f, g), (&u, &v))?;
            let swapped = pair_dual((g, f), (&u, &v))?;
            let term = if plus {
                direct + &swap_sign * swapped
            } else {
                direct - &swap_sign * swapped
            };
            values.set(i, j, term);
        }
    }
    let form = BilinearForm::from_values(&space, parity, symmetry, values);
    form.validate()?;
    Ok(form)
}

/// Wedge product `f ^ g = f (x) g - (-1)^{|f||g|} g (x) f`, antisymmetric.
pub fn wedge(f: &Covector, g: &Covector) -> Result<BilinearForm> {
    graded_product_form(f, g, false, Symmetry::Antisymmetric)
}

/// Symmetric product `f . g = f (x) g + (-1)^{|f||g|} g (x) f`.
pub fn odot(f: &Covector, g: &Covector) -> Result<BilinearForm> {
    graded_product_form(f, g, true, Symmetry::Symmetric)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Endomorphism {
    space: Space,
    parity: Parity,
    /// matrix[i][j] is the coefficient of b_i in f(b_j)
    matrix: Mat,
}

impl Endomorphism {
    pub fn zero(space: &Space, parity: Parity) -> Self {
        Endomorphism {
            space: space.clone(),
            parity,
            matrix: Mat::zeros(space.dim(), space.dim()),
        }
    }

    pub fn identity(space: &Space) -> Self {
        Endomorphism {
            space: space.clone(),
            parity: Parity::Even,
            matrix: Mat::identity(space.dim()),
        }
    }

    pub fn from_matrix(space: &Space, parity: Parity, matrix: Mat) -> Result<Self> {
        if matrix.nrows() != space.dim() || matrix.ncols() != space.dim() {
            return Err(Error::DimensionMismatch("endomorphism matrix size".into()));
        }
        let endo = Endomorphism {
            space: space.clone(),
            parity,
            matrix,
        };
        endo.validate()?;
        Ok(endo)
    }

    /// `c * E_{target, source}`: maps the source basis vector to `c` times
    /// the target basis vector.
    pub fn matrix_unit(space: &Space, target: &str, source: &str, c: Scalar) -> Result<Self> {
        let i = space.index_of(target)?;
        let j = space.index_of(source)?;
        let mut matrix = Mat::zeros(space.dim(), space.dim());
        let parity = space.parity(i) + space.parity(j);
        matrix.set(i, j, c);
        Endomorphism::from_matrix(space, parity, matrix)
    }

    pub fn from_action<F>(space: &Space, parity: Parity, mut action: F) -> Result<Self>
    where
        F: FnMut(usize) -> SuperVector,
    {
        let n = space.dim();
        let mut matrix = Mat::zeros(n, n);
        for j in 0..n {
            let image = action(j);
            same_space(space, image.space())?;
            for i in 0..n {
                matrix.set(i, j, image.coeff(i).clone());
            }
        }
        Endomorphism::from_matrix(space, parity, matrix)
    }

    fn validate(&self) -> Result<()> {
        for i in 0..self.space.dim() {
            for j in 0..self.space.dim() {
                if self.matrix.get(i, j).is_zero() {
                    continue;
                }
                if self.space.parity(i) != self.space.parity(j) + self.parity {
                    return Err(Error::Homogeneity(format!(
                        "endomorphism entry ({}, {}) violates parity {}",
                        self.space.label(i),
                        self.space.label(j),
                        self.parity
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        self.matrix.get(i, j)
    }

    pub fn apply(&self, v: &SuperVector) -> Result<SuperVector> {
        same_space(&self.space, v.space())?;
        SuperVector::from_coeffs(&self.space, self.matrix.mul_vec(v.coeffs()))
    }

    pub fn apply_basis(&self, j: usize) -> SuperVector {
        let coeffs = (0..self.space.dim())
            .map(|i| self.matrix.get(i, j).clone())
            .collect();
        SuperVector::from_coeffs(&self.space, coeffs).unwrap()
    }

    /// Composition `self . other`; parities add.
    pub fn compose(&self, other: &Endomorphism) -> Result<Endomorphism> {
        same_space(&self.space, &other.space)?;
        Endomorphism::from_matrix(
            &self.space,
            self.parity + other.parity,
            self.matrix.mul(&other.matrix),
        )
    }

    pub fn add(&self, other: &Endomorphism) -> Result<Endomorphism> {
        same_space(&self.space, &other.space)?;
        if self.parity != other.parity {
            return Err(Error::Homogeneity(
                "cannot add endomorphisms of different parity".into(),
            ));
        }
        let n = self.space.dim();
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, self.matrix.get(i, j) + other.matrix.get(i, j));
            }
        }
        Endomorphism::from_matrix(&self.space, self.parity, m)
    }

    pub fn sub(&self, other: &Endomorphism) -> Result<Endomorphism> {
        self.add(&other.scale(&(-scalar::one())))
    }

    pub fn scale(&self, s: &Scalar) -> Endomorphism {
        let n = self.space.dim();
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, self.matrix.get(i, j) * s);
            }
        }
        Endomorphism {
            space: self.space.clone(),
            parity: self.parity,
            matrix: m,
        }
    }

    /// Graded commutator `[f, g] = f.g - (-1)^{|f||g|} g.f`.
    pub fn graded_commutator(&self, other: &Endomorphism) -> Result<Endomorphism> {
        let fg = self.compose(other)?;
        let gf = other.compose(self)?;
        fg.add(&gf.scale(&(-self.parity.koszul(other.parity))))
    }

    pub fn is_zero(&self) -> bool {
        let n = self.space.dim();
        (0..n).all(|i| (0..n).all(|j| self.matrix.get(i, j).is_zero()))
    }

    pub fn is_invertible(&self) -> bool {
        !self.matrix.det().is_zero()
    }

    pub fn inverse(&self) -> Result<Endomorphism> {
        let inv = self
            .matrix
            .inverse()
            .ok_or_else(|| Error::SingularEndomorphism("matrix has zero determinant".into()))?;
        // The inverse of an odd invertible map is odd.
        Endomorphism::from_matrix(&self.space, self.parity, inv)
    }
}

/// Adjoint with respect to a nondegenerate homogeneous form:
/// `B(f(v), w) = (-1)^{|f||v|} B(v, f*(w))` on all basis pairs.
pub fn adjoint(f: &Endomorphism, form: &BilinearForm) -> Result<Endomorphism> {
    same_space(f.space(), form.space())?;
    let space = f.space();
    let n = space.dim();
    // Left Gram table L[i][k] = B(b_i, b_k); column z_j of f* solves
    // L z_j = r_j with r_j[i] = (-1)^{|f||b_i|} B(f(b_i), b_j).
    let left = form.raw();
    let mut columns = Vec::with_capacity(n);
    for j in 0..n {
        let basis_j = SuperVector::basis(space, j);
        let rhs: Vec<Scalar> = (0..n)
            .map(|i| {
                let sign = f.parity().koszul(space.parity(i));
                let fv = f.apply_basis(i);
                sign * form.eval(&fv, &basis_j).unwrap()
            })
            .collect();
        let z = left
            .solve_unique(&rhs)
            .ok_or_else(|| Error::SingularForm("adjoint requires a nondegenerate form".into()))?;
        columns.push(z);
    }
    let mut matrix = Mat::zeros(n, n);
    for (j, col) in columns.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            matrix.set(i, j, v.clone());
        }
    }
    Endomorphism::from_matrix(space, f.parity(), matrix)
}

/// The unique `x` with `B(x, b_k) = rhs[k]` for every basis vector `b_k`.
pub fn solve_against_form(form: &BilinearForm, rhs: &[Scalar]) -> Result<SuperVector> {
    let n = form.space().dim();
    if rhs.len() != n {
        return Err(Error::DimensionMismatch("rhs length".into()));
    }
    // B(x, b_k) = sum_i x_i B(b_i, b_k): coefficient matrix M[k][i] = B(b_i, b_k).
    let m = form.raw().transpose();
    let x = m
        .solve_unique(rhs)
        .ok_or_else(|| Error::SingularForm("cannot solve against a degenerate form".into()))?;
    SuperVector::from_coeffs(form.space(), x)
}

/// The unique `x` with `B(b_k, x) = rhs[k]` for every basis vector `b_k`.
pub fn solve_against_form_left(form: &BilinearForm, rhs: &[Scalar]) -> Result<SuperVector> {
    let n = form.space().dim();
    if rhs.len() != n {
        return Err(Error::DimensionMismatch("rhs length".into()));
    }
    let x = form
        .raw()
        .solve_unique(rhs)
        .ok_or_else(|| Error::SingularForm("cannot solve against a degenerate form".into()))?;
    SuperVector::from_coeffs(form.space(), x)
}

#[cfg(test)]
pub(crate) mod tests_support {
    use super::*;

    pub fn diag(space: &Space, entries: &[Scalar]) -> Endomorphism {
        let mut m = Mat::zeros(space.dim(), space.dim());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        Endomorphism::from_matrix(space, Parity::Even, m).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::tests_support::diag;
    use super::*;
    use crate::scalar::{frac, int};

    pub(crate) fn space_2_2() -> Space {
        SuperSpace::new(vec![
            ("x1".into(), Parity::Even),
            ("x2".into(), Parity::Even),
            ("y1".into(), Parity::Odd),
            ("y2".into(), Parity::Odd),
        ])
        .unwrap()
    }

    fn dual(space: &Space, label: &str) -> Covector {
        Covector::dual(space, label).unwrap()
    }

    /// omega = 2 x1*^x2* - y1*^y2*
    fn omega_g2(space: &Space) -> BilinearForm {
        let a = wedge(&dual(space, "x1"), &dual(space, "x2"))
            .unwrap()
            .scale(&int(2));
        let b = wedge(&dual(space, "y1"), &dual(space, "y2"))
            .unwrap()
            .scale(&int(-1));
        a.add(&b).unwrap()
    }

    /// B = -x1*.x2* - y1*.y2*
    fn bform_g2(space: &Space) -> BilinearForm {
        let a = odot(&dual(space, "x1"), &dual(space, "x2"))
            .unwrap()
            .scale(&int(-1));
        let b = odot(&dual(space, "y1"), &dual(space, "y2"))
            .unwrap()
            .scale(&int(-1));
        a.add(&b).unwrap()
    }

    #[test]
    fn canonical_ordering_reorders_even_first() {
        let space = SuperSpace::new(vec![
            ("y1".into(), Parity::Odd),
            ("x1".into(), Parity::Even),
        ])
        .unwrap();
        assert_eq!(space.label(0), "x1");
        assert_eq!(space.label(1), "y1");
        assert_eq!(space.source_positions(), &[1, 0]);
    }

    #[test]
    fn pair_dual_signs() {
        let space = space_2_2();
        let x1 = SuperVector::from_entries(&space, &[("x1", int(1))]).unwrap();
        let x2 = SuperVector::from_entries(&space, &[("x2", int(1))]).unwrap();
        let y1 = SuperVector::from_entries(&space, &[("y1", int(1))]).unwrap();
        let y2 = SuperVector::from_entries(&space, &[("y2", int(1))]).unwrap();

        let x1d = dual(&space, "x1");
        let x2d = dual(&space, "x2");
        let y1d = dual(&space, "y1");
        let y2d = dual(&space, "y2");

        assert_eq!(pair_dual((&x1d, &x2d), (&x1, &x2)).unwrap(), int(1));
        assert_eq!(pair_dual((&y1d, &y2d), (&y1, &y2)).unwrap(), int(-1));
        assert_eq!(pair_dual((&y2d, &y1d), (&y1, &y2)).unwrap(), int(0));

        let mixed = &x1 + &y1;
        assert!(pair_dual((&x1d, &x2d), (&mixed, &x2)).is_err());
    }

    #[test]
    fn wedge_and_odot_values() {
        let space = space_2_2();
        let x1 = SuperVector::from_entries(&space, &[("x1", int(1))]).unwrap();
        let x2 = SuperVector::from_entries(&space, &[("x2", int(1))]).unwrap();
        let y1 = SuperVector::from_entries(&space, &[("y1", int(1))]).unwrap();
        let y2 = SuperVector::from_entries(&space, &[("y2", int(1))]).unwrap();

        let w_even = wedge(&dual(&space, "x1"), &dual(&space, "x2")).unwrap();
        assert_eq!(w_even.eval(&x1, &x2).unwrap(), int(1));

        let w_odd = wedge(&dual(&space, "y1"), &dual(&space, "y2")).unwrap();
        assert_eq!(w_odd.eval(&y1, &y2).unwrap(), int(-1));

        let omega = omega_g2(&space);
        assert_eq!(omega.eval(&y1, &y2).unwrap(), int(1));
        assert_eq!(omega.eval(&y2, &y1).unwrap(), int(1));
        assert_eq!(omega.eval(&x1, &x2).unwrap(), int(2));
        omega.validate().unwrap();

        let o_even = odot(&dual(&space, "x1"), &dual(&space, "x2")).unwrap();
        assert_eq!(o_even.eval(&x1, &x2).unwrap(), int(1));

        let b = bform_g2(&space);
        assert_eq!(b.eval(&y1, &y2).unwrap(), int(1));
        assert_eq!(b.eval(&y2, &y1).unwrap(), int(-1));
        b.validate().unwrap();
    }

    #[test]
    fn odot_on_mixed_parity_covectors() {
        let space = space_2_2();
        // B of Example ex2: x1*.y2* + x2*.y1*, odd symmetric.
        let b = odot(&dual(&space, "x1"), &dual(&space, "y2"))
            .unwrap()
            .add(&odot(&dual(&space, "x2"), &dual(&space, "y1")).unwrap())
            .unwrap();
        assert_eq!(b.parity(), Parity::Odd);
        let x1 = SuperVector::from_entries(&space, &[("x1", int(1))]).unwrap();
        let y2 = SuperVector::from_entries(&space, &[("y2", int(1))]).unwrap();
        assert_eq!(b.eval(&x1, &y2).unwrap(), int(1));
        b.validate().unwrap();
    }

    #[test]
    fn upsetting_fixed_points_and_signs() {
        let space = space_2_2();
        let omega = omega_g2(&space);
        let b = bform_g2(&space);

        let ub = upsetting(&b);
        let uo = upsetting(&omega);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(ub.value(i, j), b.value(i, j), "u(B) = B");
                assert_eq!(uo.value(i, j), &(-omega.value(i, j).clone()), "u(w) = -w");
            }
        }

        // Single raw entry B(y1, y2) = 1: u(B)(y2, y1) = -1.
        let single = BilinearForm::from_entries(
            &space,
            Parity::Even,
            Symmetry::None,
            &[("y1", "y2", int(1))],
        )
        .unwrap();
        let u = upsetting(&single);
        let i = space.index_of("y2").unwrap();
        let j = space.index_of("y1").unwrap();
        assert_eq!(u.value(i, j), &int(-1));

        // Involution.
        let uu = upsetting(&u);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(uu.value(i, j), single.value(i, j));
            }
        }
    }

    #[test]
    fn adjoint_examples() {
        // xi = a E_{1,3} - a E_{2,4} on the 4-dim even space with
        // omega = e1*^e4* + e2*^e3*: self-adjoint.
        let space =
            SuperSpace::new((1..=4).map(|i| (format!("e{i}"), Parity::Even)).collect()).unwrap();
        let omega = wedge(&dual(&space, "e1"), &dual(&space, "e4"))
            .unwrap()
            .add(&wedge(&dual(&space, "e2"), &dual(&space, "e3")).unwrap())
            .unwrap();
        let a = int(3);
        let xi = Endomorphism::matrix_unit(&space, "e1", "e3", a.clone())
            .unwrap()
            .add(&Endomorphism::matrix_unit(&space, "e2", "e4", -a).unwrap())
            .unwrap();
        let star = adjoint(&xi, &omega).unwrap();
        assert_eq!(star, xi);

        // Identity is self-adjoint for any nondegenerate form.
        let id = Endomorphism::identity(&space);
        assert_eq!(adjoint(&id, &omega).unwrap(), id);
    }

    #[test]
    fn adjoint_of_delta_is_minus_delta() {
        // delta of Example ex1 is omega-antisymmetric.
        let space = space_2_2();
        let omega = omega_g2(&space);
        let delta = diag(&space, &[int(-2), int(2), int(1), int(-1)]);
        let star = adjoint(&delta, &omega).unwrap();
        assert_eq!(star, delta.scale(&int(-1)));
    }

    #[test]
    fn adjoint_composition_rule() {
        let space = space_2_2();
        let omega = omega_g2(&space);
        // f odd: swaps x's and y's; g even diagonal.
        let f = Endomorphism::matrix_unit(&space, "y1", "x1", int(1))
            .unwrap()
            .add(&Endomorphism::matrix_unit(&space, "x2", "y2", int(2)).unwrap())
            .unwrap();
        let g = diag(&space, &[int(1), int(-3), frac(1, 2), int(5)]);
        let fg = f.compose(&g).unwrap();
        let lhs = adjoint(&fg, &omega).unwrap();
        let rhs = adjoint(&g, &omega)
            .unwrap()
            .compose(&adjoint(&f, &omega).unwrap())
            .unwrap()
            .scale(&f.parity().koszul(g.parity()));
        assert_eq!(lhs, rhs);
        // (f*)* = f
        let ff = adjoint(&adjoint(&f, &omega).unwrap(), &omega).unwrap();
        assert_eq!(ff, f);
    }

    #[test]
    fn solve_against_form_examples() {
        let space = space_2_2();
        let omega = omega_g2(&space);
        // omega(x, x1) = -1 and 0 elsewhere: x = 1/2 x2.
        let rhs = vec![int(-1), int(0), int(0), int(0)];
        let x = solve_against_form(&omega, &rhs).unwrap();
        let expected = SuperVector::from_entries(&space, &[("x2", frac(1, 2))]).unwrap();
        assert_eq!(x, expected);

        // rhs = 0 -> 0.
        let zero = solve_against_form(&omega, &vec![int(0); 4]).unwrap();
        assert!(zero.is_zero());

        // Degenerate form errors.
        let degenerate = BilinearForm::zero(&space, Parity::Even, Symmetry::None);
        assert!(matches!(
            solve_against_form(&degenerate, &rhs),
            Err(Error::SingularForm(_))
        ));
    }

    #[test]
    fn wedge_odot_exchange_laws() {
        let space = space_2_2();
        let pairs = [("x1", "x2"), ("y1", "y2"), ("x1", "y1")];
        for (l, r) in pairs {
            let f = dual(&space, l);
            let g = dual(&space, r);
            let sign = f.parity().koszul(g.parity());
            let w_fg = wedge(&f, &g).unwrap();
            let w_gf = wedge(&g, &f).unwrap().scale(&(-sign.clone()));
            let o_fg = odot(&f, &g).unwrap();
            let o_gf = odot(&g, &f).unwrap().scale(&sign);
            for i in 0..4 {
                for j in 0..4 {
                    assert_eq!(w_fg.value(i, j), w_gf.value(i, j));
                    assert_eq!(o_fg.value(i, j), o_gf.value(i, j));
                }
            }
        }
    }

    #[test]
    fn homogeneity_rejected() {
        let space = space_2_2();
        assert!(BilinearForm::from_entries(
            &space,
            Parity::Even,
            Symmetry::None,
            &[("x1", "y1", int(1))],
        )
        .is_err());
        assert!(Endomorphism::from_matrix(&space, Parity::Even, {
            let mut m = Mat::zeros(4, 4);
            m.set(2, 0, int(1)); // y1 <- x1 is odd
            m
        })
        .is_err());
    }
}
