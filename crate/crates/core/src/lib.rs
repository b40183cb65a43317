pub mod adjunction;
pub mod canonical;
pub mod doc;
pub mod cat;
pub mod hsg;
pub mod jguard;
pub mod kan;
pub mod neuro;
pub mod par;
pub mod registry;
pub mod temporal;
pub mod tower;
