//! Forms paired with a formal exterior derivative, combined by the Leibniz
//! rule. Used to differentiate assembled expressions without a grid.

use std::ops::{Add, Neg, Sub};

use crate::exterior::Form;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Formal<S> {
    pub val: Form<S>,
    pub d: Form<S>,
}

impl<S: Scalar> Formal<S> {
    pub fn new(val: Form<S>, d: Form<S>) -> Self {
        assert_eq!(val.dim(), d.dim());
        assert_eq!(val.degree() + 1, d.degree(), "derivative must raise the degree by one");
        Formal { val, d }
    }

    /// A function with value `v` and differential `dv`.
    pub fn function(v: S, dv: Form<S>) -> Self {
        Self::new(Form::constant(dv.dim(), v), dv)
    }

    /// A closed form.
    pub fn closed(val: Form<S>) -> Self {
        let d = Form::zero(val.dim(), val.degree() + 1);
        Formal { val, d }
    }

    /// `d(a∧b) = da∧b + (−1)^{deg a} a∧db`.
    pub fn wedge(&self, o: &Formal<S>) -> Formal<S> {
        let left = self.d.wedge(&o.val);
        let right = self.val.wedge(&o.d);
        let d = if self.val.degree() % 2 == 0 { &left + &right } else { &left - &right };
        Formal { val: self.val.wedge(&o.val), d }
    }

    pub fn scale(&self, c: &S) -> Formal<S> {
        Formal { val: self.val.scale(c), d: self.d.scale(c) }
    }
}

impl<S: Scalar> Add for &Formal<S> {
    type Output = Formal<S>;
    fn add(self, o: &Formal<S>) -> Formal<S> {
        Formal { val: &self.val + &o.val, d: &self.d + &o.d }
    }
}

impl<S: Scalar> Sub for &Formal<S> {
    type Output = Formal<S>;
    fn sub(self, o: &Formal<S>) -> Formal<S> {
        Formal { val: &self.val - &o.val, d: &self.d - &o.d }
    }
}

impl<S: Scalar> Neg for &Formal<S> {
    type Output = Formal<S>;
    fn neg(self) -> Formal<S> {
        Formal { val: -&self.val, d: -&self.d }
    }
}
