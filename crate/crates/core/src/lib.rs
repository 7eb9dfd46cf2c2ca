pub mod graph;
pub mod lcl;
pub mod sim;
pub mod det;
pub mod randomized;
pub mod analysis;
