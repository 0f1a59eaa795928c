//! Reference computations for the test suites, written without the library's
//! own kernels where possible, plus the acceptance suite under `tests/`.

pub mod oracles;
