//! Points and tangent vectors of C^2 in split real/complex form.
//!
//! Everything downstream works over the identification
//! `(z, w) = (x + iy, u + iv)`, so points and tangents are stored as four
//! real coordinates with complex views on top.

use num_complex::Complex64;
use std::fmt;

/// Point of C^2, stored as the four real coordinates `(x, y, u, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CPoint {
    pub x: f64,
    pub y: f64,
    pub u: f64,
    pub v: f64,
}

impl CPoint {
    pub const ORIGIN: CPoint = CPoint {
        x: 0.0,
        y: 0.0,
        u: 0.0,
        v: 0.0,
    };

    pub fn new(x: f64, y: f64, u: f64, v: f64) -> Self {
        CPoint { x, y, u, v }
    }

    pub fn from_zw(z: Complex64, w: Complex64) -> Self {
        CPoint {
            x: z.re,
            y: z.im,
            u: w.re,
            v: w.im,
        }
    }

    /// First complex coordinate `z = x + iy`.
    pub fn z(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    /// Second complex coordinate `w = u + iv`.
    pub fn w(&self) -> Complex64 {
        Complex64::new(self.u, self.v)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.u.is_finite() && self.v.is_finite()
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.x, self.y, self.u, self.v]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        CPoint::new(a[0], a[1], a[2], a[3])
    }
}

impl fmt::Display for CPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.x, self.y, self.u, self.v)
    }
}

/// Tangent vector at a point of C^2, four real velocity components.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CTangent {
    pub dx: f64,
    pub dy: f64,
    pub du: f64,
    pub dv: f64,
}

impl CTangent {
    pub const ZERO: CTangent = CTangent {
        dx: 0.0,
        dy: 0.0,
        du: 0.0,
        dv: 0.0,
    };

    pub fn new(dx: f64, dy: f64, du: f64, dv: f64) -> Self {
        CTangent { dx, dy, du, dv }
    }

    pub fn from_zw(z_vel: Complex64, w_vel: Complex64) -> Self {
        CTangent {
            dx: z_vel.re,
            dy: z_vel.im,
            du: w_vel.re,
            dv: w_vel.im,
        }
    }

    /// Complex velocity along the `z` axis.
    pub fn z_vel(&self) -> Complex64 {
        Complex64::new(self.dx, self.dy)
    }

    /// Complex velocity along the `w` axis.
    pub fn w_vel(&self) -> Complex64 {
        Complex64::new(self.du, self.dv)
    }

    pub fn is_finite(&self) -> bool {
        self.dx.is_finite() && self.dy.is_finite() && self.du.is_finite() && self.dv.is_finite()
    }

    /// Euclidean length of the four real components.
    pub fn norm(&self) -> f64 {
        (self.dx * self.dx + self.dy * self.dy + self.du * self.du + self.dv * self.dv).sqrt()
    }

    pub fn scale(&self, s: f64) -> CTangent {
        CTangent::new(self.dx * s, self.dy * s, self.du * s, self.dv * s)
    }

    pub fn neg(&self) -> CTangent {
        self.scale(-1.0)
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.dx, self.dy, self.du, self.dv]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        CTangent::new(a[0], a[1], a[2], a[3])
    }
}

impl fmt::Display for CTangent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.dx, self.dy, self.du, self.dv)
    }
}
