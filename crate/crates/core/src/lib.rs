pub mod braid;
pub mod canon;
pub mod clasper;
pub mod diagram;
pub mod free_group;
pub mod knot;
pub mod magnus;
pub mod sparse;
pub mod verify;
