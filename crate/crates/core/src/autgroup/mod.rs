//! Tame automorphisms of `K<x,y>` and `K[x,y]` as words in affine and
//! triangular generators.
//!
//! Composition follows `(psi phi)(u) = psi(phi(u))`, where an automorphism
//! acts by substitution `phi(u) = u(phi x, phi y)`. Words store their
//! factors in written order and apply them from the last one to the first.

mod random;
mod simplify;

pub use random::random_tame;
pub use simplify::{to_simplified, SimplifiedForm};

use std::fmt;

use num_traits::{One, Zero};

use crate::commalg::{xy_vars, CommPoly, UniPoly};
use crate::error::{Error, Result};
use crate::freealg::FreePoly;
use crate::scalar::{fmt_scalar, Scalar};

/// Algebras generated by `x` and `y` on which automorphisms act.
pub trait XyAlgebra: Clone + PartialEq + fmt::Debug {
    fn gen_x() -> Self;
    fn gen_y() -> Self;
    fn constant(c: Scalar) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn scaled(&self, c: &Scalar) -> Self;
    fn subst_xy(&self, ix: &Self, iy: &Self) -> Result<Self>;
}

impl XyAlgebra for FreePoly {
    fn gen_x() -> Self {
        FreePoly::x()
    }
    fn gen_y() -> Self {
        FreePoly::y()
    }
    fn constant(c: Scalar) -> Self {
        FreePoly::constant(c)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn scaled(&self, c: &Scalar) -> Self {
        self.scale(c)
    }
    fn subst_xy(&self, ix: &Self, iy: &Self) -> Result<Self> {
        Ok(self.substitute(ix, iy))
    }
}

impl XyAlgebra for CommPoly {
    fn gen_x() -> Self {
        CommPoly::x()
    }
    fn gen_y() -> Self {
        CommPoly::y()
    }
    fn constant(c: Scalar) -> Self {
        CommPoly::constant(c, xy_vars())
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn scaled(&self, c: &Scalar) -> Self {
        self.scale(c)
    }
    fn subst_xy(&self, ix: &Self, iy: &Self) -> Result<Self> {
        let u = self
            .align(&xy_vars())
            .map_err(|_| Error::VariableMismatch(format!("expected variables x, y, got {:?}", self.vars())))?;
        u.substitute(&[ix.clone(), iy.clone()])
    }
}

fn uni_in<A: XyAlgebra>(p: &UniPoly, t: &A) -> A {
    let mut acc = A::constant(Scalar::zero());
    for c in p.coeffs().iter().rev() {
        acc = acc.times(t).plus(&A::constant(c.clone()));
    }
    acc
}

fn lin<A: XyAlgebra>(a: &Scalar, c: &Scalar, e: &Scalar) -> A {
    A::gen_x().scaled(a).plus(&A::gen_y().scaled(c)).plus(&A::constant(e.clone()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementaryAut {
    /// `(a x + c y + e, b x + d y + f)`
    Affine { a: Scalar, c: Scalar, e: Scalar, b: Scalar, d: Scalar, f: Scalar },
    /// `(alpha x + p(y), beta y + eta)`
    Triangular { alpha: Scalar, p: UniPoly, beta: Scalar, eta: Scalar },
}

impl ElementaryAut {
    pub fn affine(a: Scalar, c: Scalar, e: Scalar, b: Scalar, d: Scalar, f: Scalar) -> Result<Self> {
        if (&a * &d - &c * &b).is_zero() {
            return Err(Error::NotInvertible("affine map with zero determinant".into()));
        }
        Ok(ElementaryAut::Affine { a, c, e, b, d, f })
    }

    pub fn triangular(alpha: Scalar, p: UniPoly, beta: Scalar, eta: Scalar) -> Result<Self> {
        if alpha.is_zero() || beta.is_zero() {
            return Err(Error::NotInvertible("triangular map needs nonzero alpha and beta".into()));
        }
        Ok(ElementaryAut::Triangular { alpha, p, beta, eta })
    }

    pub fn tau() -> Self {
        let (o, z) = (Scalar::one(), Scalar::zero());
        ElementaryAut::Affine { a: z.clone(), c: o.clone(), e: z.clone(), b: o, d: z.clone(), f: z }
    }

    pub fn identity() -> Self {
        ElementaryAut::Triangular {
            alpha: Scalar::one(),
            p: UniPoly::zero(),
            beta: Scalar::one(),
            eta: Scalar::zero(),
        }
    }

    /// `(x + p(y), y)`
    pub fn shear(p: UniPoly) -> Self {
        ElementaryAut::Triangular { alpha: Scalar::one(), p, beta: Scalar::one(), eta: Scalar::zero() }
    }

    /// `(alpha x + xi, beta y + eta)`
    pub fn diag_translate(alpha: Scalar, xi: Scalar, beta: Scalar, eta: Scalar) -> Self {
        ElementaryAut::Triangular { alpha, p: UniPoly::constant(xi), beta, eta }
    }

    pub fn is_tau(&self) -> bool {
        *self == Self::tau()
    }

    /// Lies in the triangular subgroup `B`.
    pub fn is_triangular(&self) -> bool {
        match self {
            ElementaryAut::Affine { b, .. } => b.is_zero(),
            ElementaryAut::Triangular { .. } => true,
        }
    }

    /// Lies in the affine subgroup `A`.
    pub fn is_affine(&self) -> bool {
        match self {
            ElementaryAut::Affine { .. } => true,
            ElementaryAut::Triangular { p, .. } => p.degree().unwrap_or(0) <= 1,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.to_triangular().is_some_and(|t| t == Self::identity())
    }

    /// The same map in triangular form, if it lies in `B`.
    pub fn to_triangular(&self) -> Option<ElementaryAut> {
        match self {
            ElementaryAut::Triangular { .. } => Some(self.clone()),
            ElementaryAut::Affine { a, c, e, b, d, f } if b.is_zero() => Some(ElementaryAut::Triangular {
                alpha: a.clone(),
                p: UniPoly::new(vec![e.clone(), c.clone()]),
                beta: d.clone(),
                eta: f.clone(),
            }),
            _ => None,
        }
    }

    /// The same map in affine form, if it lies in `A`.
    pub fn to_affine(&self) -> Option<ElementaryAut> {
        match self {
            ElementaryAut::Affine { .. } => Some(self.clone()),
            ElementaryAut::Triangular { alpha, p, beta, eta } if self.is_affine() => Some(ElementaryAut::Affine {
                a: alpha.clone(),
                c: p.coeff(1),
                e: p.coeff(0),
                b: Scalar::zero(),
                d: beta.clone(),
                f: eta.clone(),
            }),
            _ => None,
        }
    }

    pub fn images<A: XyAlgebra>(&self) -> (A, A) {
        match self {
            ElementaryAut::Affine { a, c, e, b, d, f } => (lin(a, c, e), lin(b, d, f)),
            ElementaryAut::Triangular { alpha, p, beta, eta } => {
                let z = Scalar::zero();
                (A::gen_x().scaled(alpha).plus(&uni_in(p, &A::gen_y())), lin(&z, beta, eta))
            }
        }
    }

    pub fn apply<A: XyAlgebra>(&self, u: &A) -> Result<A> {
        let (ix, iy) = self.images::<A>();
        u.subst_xy(&ix, &iy)
    }

    /// Determinant of the linear part.
    pub fn theta(&self) -> Scalar {
        match self {
            ElementaryAut::Affine { a, c, b, d, .. } => a * d - c * b,
            ElementaryAut::Triangular { alpha, beta, .. } => alpha * beta,
        }
    }

    pub fn inverse(&self) -> ElementaryAut {
        match self {
            ElementaryAut::Affine { a, c, e, b, d, f } => {
                // Solve X = a x' + c y' + e, Y = b x' + d y' + f for x', y'.
                let det = a * d - c * b;
                let (ia, ic, ib, id) = (d / &det, -c / &det, -b / &det, a / &det);
                let ie = -(&ia * e + &ic * f);
                let i_f = -(&ib * e + &id * f);
                ElementaryAut::Affine { a: ia, c: ic, e: ie, b: ib, d: id, f: i_f }
            }
            ElementaryAut::Triangular { alpha, p, beta, eta } => {
                // y' = (y - eta)/beta, x' = (x - p(y'))/alpha
                let ib = beta.recip();
                let y_inv = UniPoly::new(vec![-eta * &ib, ib.clone()]);
                let ia = alpha.recip();
                let q = p.compose(&y_inv).scale(&-ia.clone());
                ElementaryAut::Triangular { alpha: ia, p: q, beta: ib, eta: -eta / beta }
            }
        }
    }

    /// `self . other` for two maps in `B`.
    pub(crate) fn compose_triangular(&self, other: &ElementaryAut) -> ElementaryAut {
        let (Some(ElementaryAut::Triangular { alpha: a1, p: p1, beta: b1, eta: e1 }),
            Some(ElementaryAut::Triangular { alpha: a2, p: p2, beta: b2, eta: e2 })) =
            (self.to_triangular(), other.to_triangular())
        else {
            panic!("compose_triangular on non-triangular maps");
        };
        let y_img = UniPoly::new(vec![e1.clone(), b1.clone()]);
        ElementaryAut::Triangular {
            alpha: &a2 * &a1,
            p: &p1.scale(&a2) + &p2.compose(&y_img),
            beta: &b2 * &b1,
            eta: &b2 * &e1 + &e2,
        }
    }
}

impl fmt::Display for ElementaryAut {
    /// CLI literal syntax: `tau`, `affine(a,c,e; b,d,f)`, `tri(alpha; p(y); beta; eta)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_tau() {
            return write!(f, "tau");
        }
        match self {
            ElementaryAut::Affine { a, c, e, b, d, f: ff } => write!(
                f,
                "affine({},{},{}; {},{},{})",
                fmt_scalar(a),
                fmt_scalar(c),
                fmt_scalar(e),
                fmt_scalar(b),
                fmt_scalar(d),
                fmt_scalar(ff)
            ),
            ElementaryAut::Triangular { alpha, p, beta, eta } => write!(
                f,
                "tri({}; {}; {}; {})",
                fmt_scalar(alpha),
                p.fmt_in("y"),
                fmt_scalar(beta),
                fmt_scalar(eta)
            ),
        }
    }
}

/// `psi_n ... psi_1`, applied right to left.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AutWord {
    pub factors: Vec<ElementaryAut>,
}

impl AutWord {
    pub fn identity() -> Self {
        AutWord::default()
    }

    pub fn new(factors: Vec<ElementaryAut>) -> Self {
        AutWord { factors }
    }

    pub fn single(e: ElementaryAut) -> Self {
        AutWord { factors: vec![e] }
    }

    pub fn tau() -> Self {
        Self::single(ElementaryAut::tau())
    }

    /// `psi . phi`
    pub fn compose(psi: &AutWord, phi: &AutWord) -> AutWord {
        let mut factors = psi.factors.clone();
        factors.extend(phi.factors.iter().cloned());
        AutWord { factors }
    }

    pub fn then(&self, psi: &AutWord) -> AutWord {
        Self::compose(psi, self)
    }

    pub fn invert(&self) -> AutWord {
        AutWord { factors: self.factors.iter().rev().map(ElementaryAut::inverse).collect() }
    }

    pub fn apply<A: XyAlgebra>(&self, u: &A) -> Result<A> {
        let mut cur = u.clone();
        for e in self.factors.iter().rev() {
            cur = e.apply(&cur)?;
        }
        Ok(cur)
    }

    /// `(phi x, phi y)`
    pub fn images<A: XyAlgebra>(&self) -> (A, A) {
        let ix = self.apply(&A::gen_x()).expect("generators always substitute");
        let iy = self.apply(&A::gen_y()).expect("generators always substitute");
        (ix, iy)
    }

    pub fn theta(&self) -> Scalar {
        self.factors.iter().map(ElementaryAut::theta).fold(Scalar::one(), |acc, t| acc * t)
    }

    /// Whether both words define the same automorphism of `K<x,y>`.
    pub fn same_map(&self, other: &AutWord) -> bool {
        self.images::<FreePoly>() == other.images::<FreePoly>()
    }

    /// `(a(x,y), b(x,y))` as free polynomials.
    pub fn images_string(&self) -> String {
        let (a, b) = self.images::<FreePoly>();
        format!("({a}, {b})")
    }
}

impl fmt::Display for AutWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "{}", ElementaryAut::identity());
        }
        let parts: Vec<String> = self.factors.iter().map(|e| e.to_string()).collect();
        write!(f, "{}", parts.join(" . "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn tri(alpha: i64, p: &[i64], beta: i64, eta: i64) -> ElementaryAut {
        ElementaryAut::triangular(int(alpha), UniPoly::from_ints(p), int(beta), int(eta)).unwrap()
    }

    fn fx() -> FreePoly {
        FreePoly::x()
    }
    fn fy() -> FreePoly {
        FreePoly::y()
    }

    #[test]
    fn compose_examples() {
        let tt = AutWord::compose(&AutWord::tau(), &AutWord::tau());
        assert!(tt.same_map(&AutWord::identity()));
        let psi = AutWord::single(tri(1, &[], 1, 1));
        let phi = AutWord::single(tri(1, &[0, 1], 1, 0));
        let (a, _) = AutWord::compose(&psi, &phi).images::<FreePoly>();
        assert_eq!(a, &(&fx() + &fy()) + &FreePoly::one());
        let id = AutWord::compose(&AutWord::identity(), &phi);
        assert!(id.same_map(&phi));
    }

    #[test]
    fn inverse_examples() {
        let d = ElementaryAut::affine(int(2), int(0), int(0), int(0), int(3), int(0)).unwrap();
        let di = d.inverse();
        assert_eq!(
            di.images::<FreePoly>(),
            (fx().scale(&crate::scalar::ratio(1, 2)), fy().scale(&crate::scalar::ratio(1, 3)))
        );
        assert_eq!(tri(1, &[0, 0, 1], 1, 0).inverse(), tri(1, &[0, 0, -1], 1, 0));
        assert_eq!(tri(1, &[], 1, 5).inverse(), tri(1, &[], 1, -5));
        let t = tri(3, &[1, -2, 0, 4], -2, 7);
        let w = AutWord::new(vec![t.inverse(), t.clone()]);
        assert!(w.same_map(&AutWord::identity()));
        let a = ElementaryAut::affine(int(1), int(2), int(3), int(4), int(5), int(6)).unwrap();
        assert!(AutWord::new(vec![a.clone(), a.inverse()]).same_map(&AutWord::identity()));
    }

    #[test]
    fn apply_examples() {
        let u = &fx().pow(2) * &fy();
        assert_eq!(AutWord::tau().apply(&u).unwrap(), &fy().pow(2) * &fx());
        let s = AutWord::single(tri(1, &[0, 0, 1], 1, 0));
        assert_eq!(s.apply(&fx()).unwrap(), &fx() + &fy().pow(2));
        let c = FreePoly::commutator_xy();
        assert_eq!(AutWord::tau().apply(&c).unwrap(), -&c);
        let cu = CommPoly::x();
        assert_eq!(s.apply(&cu).unwrap().to_string(), "x + y^2");
    }

    #[test]
    fn theta_examples() {
        assert_eq!(AutWord::tau().theta(), int(-1));
        assert_eq!(tri(3, &[1, 5, 2], -2, 1).theta(), int(-6));
        assert_eq!(AutWord::identity().theta(), int(1));
    }

    #[test]
    fn composition_order_on_triangular_pair() {
        // (2x, 3y) . (x + y^3, y) sends x to 2x + 27y^3.
        let w = AutWord::new(vec![tri(2, &[], 3, 0), tri(1, &[0, 0, 0, 1], 1, 0)]);
        let (a, b) = w.images::<CommPoly>();
        assert_eq!(a.to_string(), "2*x + 27*y^3");
        assert_eq!(b.to_string(), "3*y");
        let merged = tri(2, &[], 3, 0).compose_triangular(&tri(1, &[0, 0, 0, 1], 1, 0));
        assert!(AutWord::single(merged).same_map(&w));
    }

    #[test]
    fn literal_display() {
        assert_eq!(ElementaryAut::tau().to_string(), "tau");
        assert_eq!(tri(1, &[0, 0, 1], 1, 0).to_string(), "tri(1; y^2; 1; 0)");
        let w = AutWord::new(vec![tri(1, &[0, 0, 1], 1, 0), ElementaryAut::tau()]);
        assert_eq!(w.to_string(), "tri(1; y^2; 1; 0) . tau");
    }
}
