//! Builds one level of the family and times each certification stage.
//!
//! `cargo run --release --example certify_level -- 1`

use std::time::Instant;

use bgw_core::family::{build_x, parameters, verify_lemma33, verify_theorem};
use bgw_core::scheme::{
    class_identities, extract_bw, scheme_from_bw, spectrum_report, verify_axioms,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m: u32 = std::env::args().nth(1).map_or(Ok(1), |a| a.parse())?;
    let (_, (v, k, lambda)) = parameters(m);

    let t = Instant::now();
    let inst = build_x(m)?;
    println!("build        {:>10.3?}", t.elapsed());

    let t = Instant::now();
    let lemma = verify_lemma33(&inst)?;
    println!(
        "blocks       {:>10.3?}  {}",
        t.elapsed(),
        lemma.verdict_line()
    );

    let t = Instant::now();
    let thm = verify_theorem(&inst)?;
    println!(
        "matrix       {:>10.3?}  {}",
        t.elapsed(),
        thm.verdict_line()
    );

    if m > 1 {
        return Ok(());
    }
    let t = Instant::now();
    let s = scheme_from_bw(&inst.x, v, k, lambda)?;
    println!("scheme       {:>10.3?}", t.elapsed());
    let t = Instant::now();
    let ax = verify_axioms(&s)?;
    println!("axioms       {:>10.3?}  {}", t.elapsed(), ax.verdict_line());
    let t = Instant::now();
    let ids = class_identities(&s, v, k)?;
    println!(
        "identities   {:>10.3?}  {}",
        t.elapsed(),
        ids.verdict_line()
    );
    let t = Instant::now();
    let (_, spec) = spectrum_report(&s, v, k)?;
    println!(
        "spectrum     {:>10.3?}  {}",
        t.elapsed(),
        spec.verdict_line()
    );
    let t = Instant::now();
    let w = extract_bw(&s)?;
    println!(
        "extract      {:>10.3?}  {}x{}",
        t.elapsed(),
        w.rows(),
        w.cols()
    );
    Ok(())
}
