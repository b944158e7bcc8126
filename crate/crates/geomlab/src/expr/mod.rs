//! Expression trees over the four Wirtinger symbols `z, zbar, w, wbar`.
//!
//! Surface syntax (`Re`, `Im`, `|.|^2`, `conj`) is lowered at parse time, so a
//! constructed tree only ever contains the four leaf symbols, complex
//! constants and the arithmetic/exp/log/integer-power nodes. Trees are
//! immutable and reference-counted; evaluation is a pure function, so shared
//! trees may be evaluated from any number of threads.

mod parser;

pub use parser::{parse, ParseError};

use crate::point::CPoint;
use num_complex::Complex64;
use std::fmt;
use std::sync::Arc;

/// One of the four independent Wirtinger symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sym {
    Z,
    ZBar,
    W,
    WBar,
}

impl Sym {
    /// The conjugate symbol (`z <-> zbar`, `w <-> wbar`).
    pub fn conjugate(self) -> Sym {
        match self {
            Sym::Z => Sym::ZBar,
            Sym::ZBar => Sym::Z,
            Sym::W => Sym::WBar,
            Sym::WBar => Sym::W,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sym::Z => "z",
            Sym::ZBar => "zbar",
            Sym::W => "w",
            Sym::WBar => "wbar",
        }
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Shared handle to an expression node.
pub type ExprRef = Arc<Expr>;

/// Lowered expression tree.
///
/// Power exponents are literal integers; fractional powers are not
/// representable, which keeps differentiation closed under the node set.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Complex64),
    Var(Sym),
    Neg(ExprRef),
    Exp(ExprRef),
    Log(ExprRef),
    Add(ExprRef, ExprRef),
    Sub(ExprRef, ExprRef),
    Mul(ExprRef, ExprRef),
    Div(ExprRef, ExprRef),
    Pow(ExprRef, i32),
}

fn finite(c: Complex64) -> bool {
    c.re.is_finite() && c.im.is_finite()
}

impl Expr {
    pub fn constant(c: Complex64) -> ExprRef {
        Arc::new(Expr::Const(c))
    }

    pub fn real(r: f64) -> ExprRef {
        Expr::constant(Complex64::new(r, 0.0))
    }

    pub fn var(s: Sym) -> ExprRef {
        Arc::new(Expr::Var(s))
    }

    // The smart constructors fold when every operand is a constant and the
    // result is finite. Nothing else is simplified; a derivative keeps
    // whatever shape the rules produce.

    pub fn add(a: ExprRef, b: ExprRef) -> ExprRef {
        if let (Expr::Const(x), Expr::Const(y)) = (a.as_ref(), b.as_ref()) {
            let c = x + y;
            if finite(c) {
                return Expr::constant(c);
            }
        }
        Arc::new(Expr::Add(a, b))
    }

    pub fn sub(a: ExprRef, b: ExprRef) -> ExprRef {
        if let (Expr::Const(x), Expr::Const(y)) = (a.as_ref(), b.as_ref()) {
            let c = x - y;
            if finite(c) {
                return Expr::constant(c);
            }
        }
        Arc::new(Expr::Sub(a, b))
    }

    pub fn mul(a: ExprRef, b: ExprRef) -> ExprRef {
        if let (Expr::Const(x), Expr::Const(y)) = (a.as_ref(), b.as_ref()) {
            let c = x * y;
            if finite(c) {
                return Expr::constant(c);
            }
        }
        Arc::new(Expr::Mul(a, b))
    }

    pub fn div(a: ExprRef, b: ExprRef) -> ExprRef {
        if let (Expr::Const(x), Expr::Const(y)) = (a.as_ref(), b.as_ref()) {
            if y.norm_sqr() != 0.0 {
                let c = x / y;
                if finite(c) {
                    return Expr::constant(c);
                }
            }
        }
        Arc::new(Expr::Div(a, b))
    }

    pub fn neg(a: ExprRef) -> ExprRef {
        if let Expr::Const(x) = a.as_ref() {
            return Expr::constant(-x);
        }
        Arc::new(Expr::Neg(a))
    }

    pub fn exp(a: ExprRef) -> ExprRef {
        if let Expr::Const(x) = a.as_ref() {
            let c = x.exp();
            if finite(c) {
                return Expr::constant(c);
            }
        }
        Arc::new(Expr::Exp(a))
    }

    pub fn log(a: ExprRef) -> ExprRef {
        if let Expr::Const(x) = a.as_ref() {
            if x.norm_sqr() != 0.0 {
                let c = x.ln();
                if finite(c) {
                    return Expr::constant(c);
                }
            }
        }
        Arc::new(Expr::Log(a))
    }

    pub fn pow(a: ExprRef, n: i32) -> ExprRef {
        if let Expr::Const(x) = a.as_ref() {
            if n >= 0 || x.norm_sqr() != 0.0 {
                let c = x.powi(n);
                if finite(c) {
                    return Expr::constant(c);
                }
            }
        }
        Arc::new(Expr::Pow(a, n))
    }

    /// True if any leaf of the tree is one of `syms`.
    pub fn depends_on(&self, syms: &[Sym]) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var(s) => syms.contains(s),
            Expr::Neg(a) | Expr::Exp(a) | Expr::Log(a) | Expr::Pow(a, _) => a.depends_on(syms),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.depends_on(syms) || b.depends_on(syms)
            }
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 1,
            Expr::Neg(a) | Expr::Exp(a) | Expr::Log(a) | Expr::Pow(a, _) => 1 + a.node_count(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                1 + a.node_count() + b.node_count()
            }
        }
    }
}

/// Structural conjugation: swaps each symbol with its bar partner and
/// conjugates constants. Applying it twice is the identity, and for every
/// point `p`, `eval(conjugate(e), p) == conj(eval(e, p))`.
pub fn conjugate(e: &ExprRef) -> ExprRef {
    match e.as_ref() {
        Expr::Const(c) => Expr::constant(c.conj()),
        Expr::Var(s) => Expr::var(s.conjugate()),
        Expr::Neg(a) => Expr::neg(conjugate(a)),
        Expr::Exp(a) => Expr::exp(conjugate(a)),
        Expr::Log(a) => Expr::log(conjugate(a)),
        Expr::Add(a, b) => Expr::add(conjugate(a), conjugate(b)),
        Expr::Sub(a, b) => Expr::sub(conjugate(a), conjugate(b)),
        Expr::Mul(a, b) => Expr::mul(conjugate(a), conjugate(b)),
        Expr::Div(a, b) => Expr::div(conjugate(a), conjugate(b)),
        Expr::Pow(a, n) => Expr::pow(conjugate(a), *n),
    }
}

/// Evaluation failure, carrying a rendering of the offending node.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("division by zero in `{0}`")]
    DivisionByZero(String),
    #[error("log of zero in `{0}`")]
    LogOfZero(String),
    #[error("zero raised to negative power in `{0}`")]
    ZeroToNegativePower(String),
}

fn sym_value(s: Sym, p: CPoint) -> Complex64 {
    match s {
        Sym::Z => p.z(),
        Sym::ZBar => p.z().conj(),
        Sym::W => p.w(),
        Sym::WBar => p.w().conj(),
    }
}

/// Evaluate a tree at a point, treating the four symbols as independent.
pub fn eval(e: &Expr, p: CPoint) -> Result<Complex64, EvalError> {
    match e {
        Expr::Const(c) => Ok(*c),
        Expr::Var(s) => Ok(sym_value(*s, p)),
        Expr::Neg(a) => Ok(-eval(a, p)?),
        Expr::Exp(a) => Ok(eval(a, p)?.exp()),
        Expr::Log(a) => {
            let v = eval(a, p)?;
            if v.norm_sqr() == 0.0 {
                return Err(EvalError::LogOfZero(e.to_string()));
            }
            Ok(v.ln())
        }
        Expr::Add(a, b) => Ok(eval(a, p)? + eval(b, p)?),
        Expr::Sub(a, b) => Ok(eval(a, p)? - eval(b, p)?),
        Expr::Mul(a, b) => Ok(eval(a, p)? * eval(b, p)?),
        Expr::Div(a, b) => {
            let den = eval(b, p)?;
            if den.norm_sqr() == 0.0 {
                return Err(EvalError::DivisionByZero(e.to_string()));
            }
            Ok(eval(a, p)? / den)
        }
        Expr::Pow(a, n) => {
            let base = eval(a, p)?;
            if *n < 0 && base.norm_sqr() == 0.0 {
                return Err(EvalError::ZeroToNegativePower(e.to_string()));
            }
            Ok(base.powi(*n))
        }
    }
}

// Printing uses the same grammar the parser accepts, so a printed tree
// reparses (and refolds) to a structurally identical tree.

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Neg(..) => 3,
        Expr::Pow(..) => 4,
        Expr::Exp(..) | Expr::Log(..) | Expr::Var(_) => 5,
        Expr::Const(c) => {
            if c.im == 0.0 {
                if c.re < 0.0 {
                    3
                } else {
                    5
                }
            } else if c.re == 0.0 {
                if c.im == 1.0 {
                    5
                } else {
                    2
                }
            } else {
                1
            }
        }
    }
}

fn fmt_child(e: &Expr, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if precedence(e) < min {
        write!(f, "({})", e)
    } else {
        write!(f, "{}", e)
    }
}

fn fmt_const(c: Complex64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if c.im == 0.0 {
        write!(f, "{}", c.re)
    } else if c.re == 0.0 {
        if c.im == 1.0 {
            write!(f, "i")
        } else if c.im == -1.0 {
            write!(f, "-i")
        } else {
            write!(f, "{}*i", c.im)
        }
    } else if c.im > 0.0 {
        write!(f, "{}+{}*i", c.re, c.im)
    } else {
        write!(f, "{}-{}*i", c.re, -c.im)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => fmt_const(*c, f),
            Expr::Var(s) => write!(f, "{}", s),
            Expr::Neg(a) => {
                write!(f, "-")?;
                fmt_child(a, 3, f)
            }
            Expr::Exp(a) => write!(f, "exp({})", a),
            Expr::Log(a) => write!(f, "log({})", a),
            Expr::Add(a, b) => {
                fmt_child(a, 1, f)?;
                write!(f, "+")?;
                fmt_child(b, 2, f)
            }
            Expr::Sub(a, b) => {
                fmt_child(a, 1, f)?;
                write!(f, "-")?;
                fmt_child(b, 2, f)
            }
            Expr::Mul(a, b) => {
                fmt_child(a, 2, f)?;
                write!(f, "*")?;
                fmt_child(b, 3, f)
            }
            Expr::Div(a, b) => {
                fmt_child(a, 2, f)?;
                write!(f, "/")?;
                fmt_child(b, 3, f)
            }
            Expr::Pow(a, n) => {
                fmt_child(a, 5, f)?;
                write!(f, "^{}", n)
            }
        }
    }
}
