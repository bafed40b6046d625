mod common;

use common::layout::swap_endianness;
use msd_core::volume::{Extents, LabelVolume, Spacing};
use msd_eval::nifti::{decode_label_volume, gzip, parse_header, write_synthetic, Datatype, Endian, NiftiError};
use proptest::prelude::*;

const TYPES: [Datatype; 6] = [
    Datatype::Uint8,
    Datatype::Int16,
    Datatype::Uint16,
    Datatype::Int32,
    Datatype::Float32,
    Datatype::Float64,
];

/// Spacings that are exact in f32 so the whole volume compares equal.
fn volume() -> impl Strategy<Value = LabelVolume> {
    ([1usize..=16, 1usize..=16, 1usize..=16], [1u32..=64, 1u32..=64, 1u32..=64]).prop_flat_map(|(d, s)| {
        let n = d[0] * d[1] * d[2];
        proptest::collection::vec(0u32..=5, n).prop_map(move |labels| {
            let spacing = Spacing(s.map(|k| k as f64 / 16.0));
            LabelVolume::new(Extents { nx: d[0], ny: d[1], nz: d[2] }, spacing, labels, "").unwrap()
        })
    })
}

fn same(a: &LabelVolume, b: &LabelVolume) -> bool {
    a.extents() == b.extents() && a.spacing() == b.spacing() && a.labels() == b.labels()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn round_trips(v in volume(), t in prop::sample::select(TYPES.to_vec()), big in any::<bool>(), zipped in any::<bool>()) {
        let endian = if big { Endian::Big } else { Endian::Little };
        let mut bytes = write_synthetic(&v, t, endian).unwrap();
        if zipped {
            bytes = gzip(&bytes);
        }
        prop_assert!(same(&decode_label_volume(&bytes, "x").unwrap(), &v));
    }

    #[test]
    fn byte_swapped_copy_decodes_identically(v in volume(), t in prop::sample::select(TYPES.to_vec())) {
        let little = write_synthetic(&v, t, Endian::Little).unwrap();
        let swapped = swap_endianness(&little);
        prop_assert_eq!(&swapped, &write_synthetic(&v, t, Endian::Big).unwrap());
        let h1 = parse_header(&little).unwrap();
        let h2 = parse_header(&swapped).unwrap();
        prop_assert_eq!(h1.dim, h2.dim);
        prop_assert_eq!(h1.pixdim, h2.pixdim);
        prop_assert_eq!(h1.datatype, h2.datatype);
        prop_assert!(same(&decode_label_volume(&swapped, "x").unwrap(), &v));
    }

    #[test]
    fn random_bytes_never_panic(bytes in proptest::collection::vec(any::<u8>(), 0..600)) {
        let _ = decode_label_volume(&bytes, "x");
        let _ = parse_header(&bytes);
    }

    #[test]
    fn corrupted_files_never_panic(v in volume(), flips in proptest::collection::vec((0usize..400, any::<u8>()), 1..8)) {
        let mut bytes = write_synthetic(&v, Datatype::Int16, Endian::Little).unwrap();
        for (at, b) in flips {
            let at = at % bytes.len();
            bytes[at] = b;
        }
        let _ = decode_label_volume(&bytes, "x");
        let z = gzip(&bytes);
        let _ = decode_label_volume(&z[..z.len() / 2], "x");
    }
}

#[test]
fn hundred_random_bytes_are_rejected() {
    let bytes: Vec<u8> = (0..100u32).map(|i| (i * 37 % 251) as u8).collect();
    assert!(matches!(parse_header(&bytes), Err(NiftiError::TruncatedHeader(100))));
}

#[test]
fn four_d_singleton_is_squeezed_and_others_rejected() {
    let v = LabelVolume::filled(Extents { nx: 2, ny: 3, nz: 4 }, Spacing([1.0, 1.0, 1.0]), 1).unwrap();
    let mut bytes = write_synthetic(&v, Datatype::Uint8, Endian::Little).unwrap();
    bytes[40..42].copy_from_slice(&4i16.to_le_bytes());
    assert!(same(&decode_label_volume(&bytes, "x").unwrap(), &v));
    bytes[48..50].copy_from_slice(&2i16.to_le_bytes());
    assert!(matches!(decode_label_volume(&bytes, "x"), Err(NiftiError::DimensionMismatch(_))));
}

#[test]
fn scaling_is_applied_before_rounding() {
    let v = LabelVolume::filled(Extents { nx: 2, ny: 2, nz: 1 }, Spacing([1.0, 1.0, 1.0]), 3).unwrap();
    let mut bytes = write_synthetic(&v, Datatype::Int16, Endian::Little).unwrap();
    bytes[112..116].copy_from_slice(&2.0f32.to_le_bytes());
    bytes[116..120].copy_from_slice(&1.0f32.to_le_bytes());
    assert!(decode_label_volume(&bytes, "x").unwrap().labels().iter().all(|&l| l == 7));
}
