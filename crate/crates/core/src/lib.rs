//! Exact trace polynomials for rank-2 free groups and the SL(2,C) character
//! variety of the (m,2) torus knots.
//!
//! ```
//! use torus_charvar::variety::{closed_form, f_direct};
//! use torus_charvar::{Families, MPoly, TraceEngine, Var};
//!
//! let mut fam = Families::new();
//! let m = 9;
//! let direct = f_direct(&mut fam, 4);
//! assert_eq!(closed_form(&mut fam, m).unwrap(), direct);
//!
//! let f = TraceEngine::new().f_trace(m).unwrap();
//! assert_eq!(f.substitute(Var::Y, &MPoly::var(Var::X)), direct);
//! ```

pub mod families;
pub mod numeric;
pub mod poly;
pub mod trace;
pub mod variety;
pub mod word;

pub use families::{Families, FamilyReport, Identity, Route};
pub use numeric::{Kind, Mat2, MembershipReport, NumericError, Representation, Symbol, ToroReport};
pub use poly::{LaurentPalindrome, MPoly, Monomial, Point, PolyError, Var};
pub use trace::{trace_poly, Presentation, TraceEngine, TraceError, TracePoly};
pub use variety::{CurveDescription, VarietyError, VarietyReport};
pub use word::{FreeWord, Generator, Letter, WordError};
