use maxmult::spectral::{read_field, read_index_map, write_field, write_index_map, Domain, Field, Grid};
use maxmult::{Error, C64};

const FIELD: &[u8] = include_bytes!("golden/field_2d_freq.bin");
const INDEX: &[u8] = include_bytes!("golden/index_1d.bin");

fn golden_field() -> Field {
    let g = Grid::new(2, 4, 1.5).unwrap();
    let v = (0..16)
        .map(|k| C64::new(k as f64 / 4.0, (3 - k) as f64 / 8.0))
        .collect();
    Field::new(g, Domain::Frequency, v).unwrap()
}

#[test]
fn field_bytes_match_golden_file() {
    let mut buf = Vec::new();
    write_field(&mut buf, &golden_field()).unwrap();
    assert_eq!(buf, FIELD);
}

#[test]
fn golden_field_reads_back() {
    let f = read_field(FIELD).unwrap();
    let want = golden_field();
    assert_eq!(f.grid(), want.grid());
    assert_eq!(f.domain(), Domain::Frequency);
    assert_eq!(f.values(), want.values());
}

#[test]
fn index_map_matches_golden_file() {
    let g = Grid::new(1, 8, 2.0).unwrap();
    let idx: Vec<u32> = (0..8).map(|k| (5 * k) % 8).collect();
    let mut buf = Vec::new();
    write_index_map(&mut buf, &g, &idx).unwrap();
    assert_eq!(buf, INDEX);
    let (g2, idx2) = read_index_map(INDEX).unwrap();
    assert_eq!(g2, g);
    assert_eq!(idx2, idx);
}

#[test]
fn damaged_containers_are_rejected() {
    let mut bad = FIELD.to_vec();
    bad[0] = b'X';
    assert!(matches!(read_field(&bad[..]), Err(Error::Format(_))));

    let mut version = FIELD.to_vec();
    version[8] = 9;
    assert!(matches!(read_field(&version[..]), Err(Error::Format(_))));

    assert!(read_field(&FIELD[..FIELD.len() - 1]).is_err());
    assert!(matches!(read_field(INDEX), Err(Error::Format(_))));
    assert!(matches!(read_index_map(FIELD), Err(Error::Format(_))));
}
