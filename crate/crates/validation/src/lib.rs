//! Holds the `acceptance` test target, which exercises the `vanseq` library
//! end to end. Run it with `cargo test -p vanseq-validation --test acceptance`.
