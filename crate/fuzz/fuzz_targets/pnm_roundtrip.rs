//! Anything the PNM reader accepts must survive a write/reparse cycle
//! unchanged, in both the plain and raw encodings of its kind.

#![no_main]

use libfuzzer_sys::fuzz_target;
use rca::{read_pnm, write_pnm, PnmFormat, PnmImage};

fuzz_target!(|data: &[u8]| {
    let Ok(image) = read_pnm(data) else { return };
    let formats = match &image {
        PnmImage::Bitmap(_) => [PnmFormat::P1, PnmFormat::P4],
        PnmImage::Gray(_) => [PnmFormat::P2, PnmFormat::P5],
    };
    for format in formats {
        let bytes = write_pnm(&image, format).expect("canonical encoding succeeds");
        let again = read_pnm(&bytes).expect("canonical output reparses");
        assert_eq!(again, image, "round trip must be lossless");
    }
});
