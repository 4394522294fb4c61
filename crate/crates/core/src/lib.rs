//! Exact kinematics, singularity elimination and workspace classification
//! for the delta-like family of three-legged prismatic parallel robots
//! (Orthoglide, Hybridglide, Triaglide, UraneSX and custom members).

pub mod exactpoly;
pub mod robots;
pub mod kinematics;
pub mod singularity;
pub mod scan;
pub mod export;
