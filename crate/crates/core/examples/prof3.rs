use covpic_core::elimination::*;
use std::time::Instant;
fn main() {
    let t0 = Instant::now();
    let _single = build_elimination(2, 4, 9).unwrap();
    println!("single build: {:?}", t0.elapsed());
}
