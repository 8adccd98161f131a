/// Bits needed to store any count in `0..=max`; zero when `max` is zero.
pub fn count_width(max: usize) -> u32 {
    usize::BITS - max.leading_zeros()
}

/// Bits per patch position: `ceil(lg n_out)`.
pub fn position_width(n_out: usize) -> u32 {
    if n_out <= 1 {
        0
    } else {
        usize::BITS - (n_out - 1).leading_zeros()
    }
}

/// Patch-count field width for each run of `block_size` consecutive words.
///
/// The last block may be short. Returns an empty list for an empty input.
pub fn assign_block_widths(patch_counts: &[usize], block_size: usize) -> Vec<u32> {
    assert!(block_size >= 1, "block_size must be at least 1");
    patch_counts
        .chunks(block_size)
        .map(|block| count_width(block.iter().copied().max().unwrap_or(0)))
        .collect()
}
