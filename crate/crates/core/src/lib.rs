//! Exact computations with the cube recurrence on rhombus tilings of
//! zonogons: tilings and flips, Laurent and tropical evaluation, and the
//! spinor side of the isotropic Grassmannian.

pub mod cells;
pub mod engine;
pub mod exchange;
pub mod forest;
pub mod json;
pub mod laurent;
pub mod paths;
pub mod render;
pub mod spinor;
pub mod tropical;
pub mod zonogon;
