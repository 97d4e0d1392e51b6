//! End-to-end numerical checks live in `tests/acceptance.rs`.
