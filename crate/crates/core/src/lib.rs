//! Exact construction of finite simple Lie algebras over prime fields and
//! measurement of their sum-bracket growth.

pub mod arith;
pub mod roots;
pub mod lie;
pub mod forms;
pub mod growth;
pub mod extremal;
pub mod numfields;
