use sngame_core::game::KindFilter;
use sngame_core::{dynamics, equilibria, format, gadgets, rat};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let net = gadgets::gen_poa_cycle(&rat(1, 8))?;

    let report = equilibria::decide_existence(&net, KindFilter::NonTrivial, 1 << 24)?;
    assert_eq!(report.non_trivial, Some(true));

    let verdict = dynamics::has_fip(&net, 1 << 24)?;
    assert!(verdict.holds);

    println!("{}", format::serialize(&net));
    Ok(())
}
