pub mod apps;
pub mod forest_partition;
pub mod generators;
pub mod graph;
pub mod isolation;
pub mod neighborhood;
pub mod oracle;
pub mod partition;
pub mod query;
pub mod rational;
pub mod tree_decomp;
