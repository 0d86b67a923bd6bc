//! Exact and Monte Carlo experiments on element orders, conjugacy classes
//! and random generation in the finite linear groups GL(n,q) and SL(n,q).

pub mod acceptance;
pub mod classes;
pub mod error;
pub mod ff;
pub mod genprob;
pub mod gensets;
pub mod harmonic;
pub mod limits;
pub mod matgrp;
pub mod normmap;
pub mod numth;
pub mod permcyc;
pub mod pisigma;

pub use error::{Error, Result};
