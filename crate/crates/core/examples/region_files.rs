//! Region and evaluator descriptors as JSON.

use zeta_at_infinity::regions::RegionFile;
use zeta_at_infinity::zeta::EvaluatorFile;
use zeta_at_infinity::Complex64;

fn main() -> zeta_at_infinity::Result<()> {
    let text = r#"{"family":"cantor_drum","params":{"a":0.25,"b":2.5}}"#;
    let region = RegionFile::parse(text)?;
    println!("{} with measure {:.6}", region.family(), region.total_measure()?);
    println!("round trip: {}", region.to_json()?);

    let bad = r#"{"family":"cantor_drum","params":{"a":0.25,"b":1.2}}"#;
    if let Err(e) = RegionFile::parse(bad) {
        println!("rejected: {e}");
    }

    let ev = EvaluatorFile::parse(
        r#"{"family":"power_subgraph","params":{"alpha":3.0},"norm":"sup","T":2.0,"mode":"closed_form"}"#,
    )?;
    println!("zeta(-3.5; T = 2) = {}", ev.value(Complex64::new(-3.5, 0.0))?);
    println!("{}", serde_json::to_string(&ev.descriptor()?)?);
    Ok(())
}
