//! Matrix algebra over `Q_p`, hereditary orders, the congruence solver, and
//! `GL(2)` coset enumeration.

pub mod congruence;
pub mod gl2;
pub mod mat;
pub mod order;

pub use congruence::{solve_congruences, CongruenceSystem, Constraint, SolutionSet};
pub use gl2::{cell_representative, gl2_order, gl2_reps, iwahori_classify, mat2_from_tuple, shalika_embed, IwahoriClass};
pub use mat::{Mat, Mat2, Mat4};
pub use order::{Grid, OrderSpec};
