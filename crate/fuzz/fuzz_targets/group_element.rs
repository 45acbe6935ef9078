//! Fuzzes group element parsing: the first input line names a group, the
//! second is an element expression. Accepted elements must survive a
//! display / re-parse round trip unchanged.

#![no_main]

use cayley_ci::group::{GroupElement, GroupSpec};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Some((group_text, element_text)) = text.split_once('\n') else {
        return;
    };
    let Ok(spec) = GroupSpec::parse(group_text) else {
        return;
    };
    let Ok(element) = GroupElement::parse(&spec, element_text) else {
        return;
    };
    let reparsed =
        GroupElement::parse(&spec, &element.to_string()).expect("displayed element parses back");
    assert_eq!(element, reparsed);
});
