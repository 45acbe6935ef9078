//! Fuzzes the digraph text decoder. Accepted inputs must round trip:
//! re-encoding and re-decoding reproduces the same digraph.

#![no_main]

use cayley_ci::digraph::Digraph;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(digraph) = Digraph::from_text(text) else {
        return;
    };
    let encoded = digraph.to_text();
    let decoded = Digraph::from_text(&encoded).expect("encoded digraph parses back");
    assert_eq!(encoded, decoded.to_text());
    assert_eq!(digraph.arcs(), decoded.arcs());
});
