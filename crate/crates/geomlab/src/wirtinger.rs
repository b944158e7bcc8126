//! Symbolic Wirtinger differentiation of expression trees.
//!
//! The four symbols `z, zbar, w, wbar` are mutually independent, so
//! differentiation is ordinary univariate calculus per symbol. Mixed partials
//! commute up to floating-point rounding when the results are evaluated; the
//! trees themselves keep whatever shape the rules produce (plus constant
//! folding from the smart constructors).
//!
//! Derivatives up to order four are what the curvature pipeline consumes.

use crate::expr::{eval, EvalError, Expr, ExprRef, Sym};
use crate::point::CPoint;
use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::RwLock;

/// Highest derivative order the engine ever requests.
pub const MAX_DERIV_ORDER: usize = 4;

/// Exact symbolic derivative with respect to one symbol.
pub fn derive(e: &ExprRef, s: Sym) -> ExprRef {
    match e.as_ref() {
        Expr::Const(_) => Expr::real(0.0),
        Expr::Var(v) => {
            if *v == s {
                Expr::real(1.0)
            } else {
                Expr::real(0.0)
            }
        }
        Expr::Neg(a) => Expr::neg(derive(a, s)),
        Expr::Exp(a) => Expr::mul(derive(a, s), e.clone()),
        Expr::Log(a) => Expr::div(derive(a, s), a.clone()),
        Expr::Add(a, b) => Expr::add(derive(a, s), derive(b, s)),
        Expr::Sub(a, b) => Expr::sub(derive(a, s), derive(b, s)),
        Expr::Mul(a, b) => Expr::add(
            Expr::mul(derive(a, s), b.clone()),
            Expr::mul(a.clone(), derive(b, s)),
        ),
        Expr::Div(a, b) => Expr::div(
            Expr::sub(
                Expr::mul(derive(a, s), b.clone()),
                Expr::mul(a.clone(), derive(b, s)),
            ),
            Expr::pow(b.clone(), 2),
        ),
        Expr::Pow(a, n) => {
            if *n == 0 {
                Expr::real(0.0)
            } else {
                Expr::mul(
                    Expr::mul(Expr::real(f64::from(*n)), Expr::pow(a.clone(), n - 1)),
                    derive(a, s),
                )
            }
        }
    }
}

/// Derivative with respect to an ordered key of symbols (leftmost applied
/// first). Keys have length 1 to [`MAX_DERIV_ORDER`].
pub fn derive_key(e: &ExprRef, key: &[Sym]) -> ExprRef {
    assert!(
        !key.is_empty() && key.len() <= MAX_DERIV_ORDER,
        "derivative key length must be in 1..={}",
        MAX_DERIV_ORDER
    );
    let mut out = e.clone();
    for &s in key {
        out = derive(&out, s);
    }
    out
}

/// `eval(derive_key(e, key), p)` without keeping the intermediate trees.
pub fn derive_eval(e: &ExprRef, key: &[Sym], p: CPoint) -> Result<Complex64, EvalError> {
    eval(&derive_key(e, key), p)
}

/// A base tree together with a cache of its derivative trees, keyed by the
/// ordered symbol sequence. Lookup builds missing entries from the longest
/// cached prefix, so repeated queries share work. The lock makes the cache
/// safe to fill from several threads; results do not depend on interleaving
/// because `derive` is pure.
pub struct Differentiator {
    base: ExprRef,
    cache: RwLock<HashMap<Vec<Sym>, ExprRef>>,
}

impl Differentiator {
    pub fn new(base: ExprRef) -> Self {
        Differentiator {
            base,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn base(&self) -> &ExprRef {
        &self.base
    }

    /// Cached derivative tree for `key`; the empty key is the base tree.
    pub fn derivative(&self, key: &[Sym]) -> ExprRef {
        if key.is_empty() {
            return self.base.clone();
        }
        assert!(
            key.len() <= MAX_DERIV_ORDER,
            "derivative key length must be at most {}",
            MAX_DERIV_ORDER
        );
        if let Some(found) = self.cache.read().expect("derivative cache").get(key) {
            return found.clone();
        }
        let (prefix, last) = key.split_at(key.len() - 1);
        let parent = self.derivative(prefix);
        let derived = derive(&parent, last[0]);
        self.cache
            .write()
            .expect("derivative cache")
            .insert(key.to_vec(), derived.clone());
        derived
    }

    pub fn eval(&self, key: &[Sym], p: CPoint) -> Result<Complex64, EvalError> {
        eval(&self.derivative(key), p)
    }
}
