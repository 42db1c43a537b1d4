//! Regenerates `src/quadform/rho_signs.rs` from the numeric ρ oracle.

use padic_riesz::quadform::{check_odd_prime, rho_sign_oracle, SquareClass};

fn main() {
    let mut rows = Vec::new();
    for p in (3u64..100).filter(|&p| check_odd_prime(p).is_ok()) {
        let depth = if p < 10 { 6 } else { 3 };
        let a = rho_sign_oracle(SquareClass::P, p, depth).expect("oracle");
        let b = rho_sign_oracle(SquareClass::EpsP, p, depth).expect("oracle");
        rows.push(format!("    ({p}, {a}, {b}),"));
    }
    println!("// Generated by `cargo run --release -p padic-riesz --example gen_rho_signs`.");
    println!("// Columns: prime, sign for class p, sign for class εp.");
    println!();
    println!("pub(super) const RHO_SIGNS: &[(u64, i8, i8)] = &[");
    for r in rows {
        println!("{r}");
    }
    println!("];");
}
