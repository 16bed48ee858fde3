//! The PNM reader must never panic, hang, or overallocate on arbitrary
//! bytes; rejecting them with an error is always acceptable.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let _ = rca::read_pnm(data);
});
