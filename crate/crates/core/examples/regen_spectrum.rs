//! Rewrites the bundled synthetic absorption table.
//!
//! `cargo run -p thzmc --example regen_spectrum > crates/core/data/synthetic_absorption.tsv`

fn main() {
    let header = "synthetic molecular absorption, 0.25 GHz grid\nfrequency_hz\tk_abs_per_m";
    print!("{}", thzmc::channel::synthetic::bundled_table().to_text(header));
}
