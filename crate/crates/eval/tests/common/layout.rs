//! NIfTI-1 header layout, used to byte-swap files independently of the parser.

/// `(offset, element size, count)` of every multi-byte header field.
pub const FIELDS: &[(usize, usize, usize)] = &[
    (0, 4, 1),    // sizeof_hdr
    (32, 4, 1),   // extents
    (36, 2, 1),   // session_error
    (40, 2, 8),   // dim
    (56, 4, 3),   // intent_p1..p3
    (68, 2, 1),   // intent_code
    (70, 2, 1),   // datatype
    (72, 2, 1),   // bitpix
    (74, 2, 1),   // slice_start
    (76, 4, 8),   // pixdim
    (108, 4, 1),  // vox_offset
    (112, 4, 1),  // scl_slope
    (116, 4, 1),  // scl_inter
    (120, 2, 1),  // slice_end
    (124, 4, 4),  // cal_max, cal_min, slice_duration, toffset
    (140, 4, 2),  // glmax, glmin
    (252, 2, 2),  // qform_code, sform_code
    (256, 4, 6),  // quatern_b..d, qoffset_x..z
    (280, 4, 12), // srow_x, srow_y, srow_z
];

fn swap_run(buf: &mut [u8], offset: usize, size: usize, count: usize) {
    for k in 0..count {
        let at = offset + k * size;
        buf[at..at + size].reverse();
    }
}

fn read_i16(buf: &[u8], at: usize, little: bool) -> i16 {
    let b = [buf[at], buf[at + 1]];
    if little { i16::from_le_bytes(b) } else { i16::from_be_bytes(b) }
}

fn read_f32(buf: &[u8], at: usize, little: bool) -> f32 {
    let b = [buf[at], buf[at + 1], buf[at + 2], buf[at + 3]];
    if little { f32::from_le_bytes(b) } else { f32::from_be_bytes(b) }
}

/// Converts an uncompressed single-file image to the opposite byte order.
pub fn swap_endianness(bytes: &[u8]) -> Vec<u8> {
    let mut out = bytes.to_vec();
    let little = i32::from_le_bytes([bytes[0], bytes[1], bytes[2], bytes[3]]) == 348;
    let datatype = read_i16(bytes, 70, little);
    let width = match datatype {
        2 => 1,
        4 | 512 => 2,
        8 | 16 => 4,
        64 => 8,
        other => panic!("datatype {other}"),
    };
    let offset = read_f32(bytes, 108, little) as usize;
    let dims: usize = (1..=3).map(|i| read_i16(bytes, 40 + 2 * i, little) as usize).product();
    for &(at, size, count) in FIELDS {
        swap_run(&mut out, at, size, count);
    }
    if width > 1 {
        swap_run(&mut out, offset, width, dims);
    }
    out
}
