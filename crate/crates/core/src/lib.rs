pub mod geometry;
pub mod interp;
pub mod lang;
pub mod loss;
pub mod transport;
pub mod par;
pub mod repair;
