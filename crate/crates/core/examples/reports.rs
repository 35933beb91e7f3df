//! Descriptor documents, analysis reports in both output modes, and basis
//! payloads that survive a round trip exactly.
//!
//! cargo run --example reports

use regincl::report::{
    emit_basis_payload, emit_descriptor, parse_basis_payload, parse_document, render, run_analyze,
    run_build_basis, OutputMode, RunOptions,
};
use regincl::Result;

fn main() -> Result<()> {
    let text = r#"{"inclusion_matrix": [[1, 1], [2, 2]], "b_dims": [1, 1], "label": "pair"}"#;
    let doc = parse_document(text)?;
    let d = doc.to_descriptor()?;
    println!("{}", emit_descriptor(&d, doc.label.as_deref()));

    let opts = RunOptions::default();
    let report = run_analyze(&d, doc.label.clone(), &opts);
    print!("{}", render(&report.to_value(), OutputMode::Human));

    let (_, family) = run_build_basis(&d, doc.label, &opts)?;
    let payload = emit_basis_payload(&family, None);
    let back = parse_basis_payload(&payload)?;
    assert_eq!(back.members, family.members());
    println!("payload: {} bytes, {} members, exact round trip", payload.len(), back.members.len());

    match parse_document("{\"inclusion_matrix\": [[1, 0]],\n \"b_dims\": [1, 1]}")?.to_descriptor() {
        Ok(_) => unreachable!(),
        Err(e) => println!("rejected: {e}"),
    }
    match parse_document("{\"inclusion_matrix\": [[1]]\n \"b_dims\": [1]}") {
        Ok(_) => unreachable!(),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
