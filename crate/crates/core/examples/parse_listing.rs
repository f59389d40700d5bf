//! Parses a DOL file and prints its AST dump.
//!
//! cargo run --example parse_listing [FILE]

use dolc::parser::{dump_ast, parse_document};

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/listing4.dol").into());
    let text = std::fs::read_to_string(&path).expect("readable input");
    let parsed = parse_document(&text);
    for d in &parsed.diagnostics {
        eprintln!("{}", d.render(&path));
    }
    print!("{}", dump_ast(&parsed.document));
}
