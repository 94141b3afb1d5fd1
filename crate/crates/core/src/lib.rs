//! Symbolic kernel for Noether analysis of two-dimensional gas dynamics in
//! mass Lagrangian coordinates.
//!
//! The crate is `no_std` (with `alloc`). It provides an exact expression
//! kernel ([`expr`]), jet-space calculus ([`jet`]), the variational model and
//! its on-shell reduction ([`model`]), the catalog of generators and
//! conserved vectors ([`catalog`]), the Noether pipeline ([`noether`]) and
//! the map to Eulerian coordinates ([`euler_map`]).

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod atom;
pub mod catalog;
pub mod coeff;
pub mod euler_map;
pub mod expr;
pub mod jet;
pub mod linsolve;
pub mod model;
pub mod noether;
