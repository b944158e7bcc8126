//! Double-double scalars and 2x2 complex matrices for the curvature
//! assembly.
//!
//! The raised curvature coefficients cancel combinations whose intermediate
//! magnitudes reach ~1e4 on the default sampling box, so a plain f64
//! assembly leaves residuals near 1e-8 even when the true value is zero.
//! Carrying the assembly in double-double pushes the residual down to the
//! quantization floor of the f64 entries themselves (a few 1e-12).
//!
//! Standard error-free kernels: Knuth two-sum, FMA two-product, and the
//! usual renormalization. `f64::mul_add` lowers to a correctly rounded
//! fused multiply-add on every target, so results are deterministic.

use num_complex::Complex64;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Dd {
    hi: f64,
    lo: f64,
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let v = s - a;
    (s, (a - (s - v)) + (b - v))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, f64::mul_add(a, b, -p))
}

impl Dd {
    pub fn new(a: f64) -> Dd {
        Dd { hi: a, lo: 0.0 }
    }

    fn norm(hi: f64, lo: f64) -> Dd {
        let (h, l) = quick_two_sum(hi, lo);
        Dd { hi: h, lo: l }
    }

    pub fn value(self) -> f64 {
        self.hi + self.lo
    }

    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        Dd::norm(s, e + self.lo + o.lo)
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        Dd::norm(p, e + self.hi * o.lo + self.lo * o.hi)
    }

    fn mul_f64(self, o: f64) -> Dd {
        let (p, e) = two_prod(self.hi, o);
        Dd::norm(p, e + self.lo * o)
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r1 = self.sub(o.mul_f64(q1));
        let q2 = r1.hi / o.hi;
        let r2 = r1.sub(o.mul_f64(q2));
        let q3 = r2.hi / o.hi;
        let (h, l) = quick_two_sum(q1, q2);
        Dd::norm(h, l + q3)
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Cdd {
    re: Dd,
    im: Dd,
}

impl Cdd {
    pub fn from_c64(c: Complex64) -> Cdd {
        Cdd {
            re: Dd::new(c.re),
            im: Dd::new(c.im),
        }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }

    pub fn add(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re.add(o.re),
            im: self.im.add(o.im),
        }
    }

    pub fn sub(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re.sub(o.re),
            im: self.im.sub(o.im),
        }
    }

    pub fn mul(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    pub fn conj(self) -> Cdd {
        Cdd {
            re: self.re,
            im: self.im.neg(),
        }
    }

    pub fn neg(self) -> Cdd {
        Cdd {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    fn div_real(self, d: Dd) -> Cdd {
        Cdd {
            re: self.re.div(d),
            im: self.im.div(d),
        }
    }
}

pub(crate) type M2dd = [[Cdd; 2]; 2];

pub(crate) fn load(m: &nalgebra::Matrix2<Complex64>) -> M2dd {
    [
        [Cdd::from_c64(m[(0, 0)]), Cdd::from_c64(m[(0, 1)])],
        [Cdd::from_c64(m[(1, 0)]), Cdd::from_c64(m[(1, 1)])],
    ]
}

pub(crate) fn mul(a: &M2dd, b: &M2dd) -> M2dd {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| a[i][0].mul(b[0][j]).add(a[i][1].mul(b[1][j])))
    })
}

pub(crate) fn sub(a: &M2dd, b: &M2dd) -> M2dd {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j].sub(b[i][j])))
}

pub(crate) fn adjoint(a: &M2dd) -> M2dd {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i].conj()))
}

/// Inverse of a Hermitian 2x2 via the adjugate. The determinant of a
/// Hermitian matrix is real; the imaginary residue is discarded.
pub(crate) fn inverse_hermitian(g: &M2dd) -> M2dd {
    let det = g[0][0].mul(g[1][1]).sub(g[0][1].mul(g[1][0])).re;
    [
        [g[1][1].div_real(det), g[0][1].neg().div_real(det)],
        [g[1][0].neg().div_real(det), g[0][0].div_real(det)],
    ]
}

/// Compensated `a*d - (re^2 + im^2)`, the Hermitian 2x2 determinant.
pub(crate) fn hermitian_det(g11: f64, g22: f64, g12: Complex64) -> f64 {
    Dd::new(g11)
        .mul(Dd::new(g22))
        .sub(Dd::new(g12.re).mul(Dd::new(g12.re)))
        .sub(Dd::new(g12.im).mul(Dd::new(g12.im)))
        .value()
}
