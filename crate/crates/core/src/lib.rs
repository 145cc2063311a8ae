pub mod chip;
pub mod cli;
pub mod error;
pub mod group;
pub mod io;
pub mod label;
pub mod linalg;
pub mod map;
pub mod matrices;
pub mod medial;
pub mod perm;
pub mod poly;
pub mod quasi_trees;
pub mod random;
