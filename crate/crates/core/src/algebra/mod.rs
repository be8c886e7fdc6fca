pub mod gcd;
pub mod hbar;
pub mod poly;
pub mod ratfunc;
pub mod rational;
pub mod series;
pub mod vars;

pub use hbar::{expand_hbar_infinity, order_at_infinity, HbarTail};
pub use poly::{Monomial, Poly};
pub use ratfunc::RationalFunction;
pub use rational::{rat, ratio, Rational};
pub use series::{Coefficient, Degree, GradedQSeries, Grading};
pub use vars::VarSpace;
