//! Holds the `acceptance` test target only; run it with
//! `cargo test -p rankdec-repro --test acceptance`.
