//! Shared test-only helpers: an extended-precision Bessel oracle that is
//! independent of the library's evaluation path.

pub mod dd;
