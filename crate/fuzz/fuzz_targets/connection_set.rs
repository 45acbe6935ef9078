//! Fuzzes connection set parsing: the first input line names a group, the
//! second a comma-separated element list. Accepted sets must round trip
//! through their display form, and on groups small enough to realize as
//! digraphs the undirectedness of the Cayley digraph must match the
//! inverse-closure of the set.

#![no_main]

use cayley_ci::digraph::cayley;
use cayley_ci::group::{ConnectionSet, GroupSpec};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Some((group_text, set_text)) = text.split_once('\n') else {
        return;
    };
    let Ok(spec) = GroupSpec::parse(group_text) else {
        return;
    };
    let Ok(set) = ConnectionSet::parse(&spec, set_text) else {
        return;
    };
    let reparsed =
        ConnectionSet::parse(&spec, &set.to_string()).expect("displayed set parses back");
    assert_eq!(set, reparsed);

    if spec.order() <= 64 {
        let digraph = cayley(&spec, &set).expect("groups of order <= 64 are realizable");
        assert_eq!(digraph.is_graph(), set.is_inverse_closed(&spec));
        assert_eq!(digraph.out_degree(0), set.len());
    }
});
