#![no_main]

use libfuzzer_sys::fuzz_target;
use selmer3::sieve::{parse_grid, GRID_MAX};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(grid) = parse_grid(s) {
        assert!(!grid.is_empty());
        assert!(grid.iter().all(|&x| (1..=GRID_MAX).contains(&x)));
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
    }
});
