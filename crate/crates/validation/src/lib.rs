// SPDX-License-Identifier: Apache-2.0

//! Home of the `acceptance` test target. It runs with
//! `cargo test -p xtalk-validation --test acceptance` and prints one line
//! per criterion.
