pub mod certify;
pub mod classes;
pub mod enumerate;
pub mod galediagram;
pub mod linalg;
pub mod lp;
pub mod orientation;
pub mod polytope;
pub mod rational;
pub mod realize;
