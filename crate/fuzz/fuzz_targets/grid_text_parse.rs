//! The grid-text reader must never panic on arbitrary input, and whatever
//! it accepts must survive a format/reparse cycle unchanged.

#![no_main]

use libfuzzer_sys::fuzz_target;
use rca::text::{format_grids, parse_grids};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(grids) = parse_grids(text) else { return };
    let formatted = format_grids(&grids);
    let reparsed = parse_grids(&formatted).expect("canonical text reparses");
    assert_eq!(reparsed, grids, "round trip must be lossless");
});
