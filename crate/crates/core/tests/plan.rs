use scriptogen::plan::{GuideTag, LetterSpacing};
use scriptogen::{build_word_plan, grid_node_position, Error, GlyphLibrary, HexGrid};

#[test]
fn grid_geometry() {
    let grid = HexGrid::default();
    assert_eq!(grid_node_position(&grid, 0).unwrap(), (grid.origin[0], grid.origin[1]));
    let (x0, y0) = grid_node_position(&grid, 3).unwrap();
    let (x1, _) = grid_node_position(&grid, 3 + grid.n_cols).unwrap();
    assert!((x1 - x0 - grid.pitch / 2.0).abs() < 1e-12);
    let (_, y2) = grid_node_position(&grid, 3 + 2 * grid.n_cols).unwrap();
    assert!((y2 - y0 - grid.pitch * 3f64.sqrt()).abs() < 1e-12);
    assert!(matches!(
        grid_node_position(&grid, grid.n_cols * grid.n_rows),
        Err(Error::NodeIndex { .. })
    ));
}

#[test]
fn word_plans() {
    let lib = GlyphLibrary::builtin();
    let single = build_word_plan("a", &lib, LetterSpacing::Proportional).unwrap();
    let glyph = lib.get('a').unwrap();
    assert_eq!(single.n_sl(), glyph.nodes.len());
    for (p, &n) in single.points.iter().zip(&glyph.nodes) {
        assert_eq!((p.x, p.y), lib.grid.node_position(n).unwrap());
    }

    let w = 9.5;
    let aa = build_word_plan("aa", &lib, LetterSpacing::Fixed(w)).unwrap();
    let n = glyph.nodes.len();
    for i in 0..n {
        assert!((aa.points[n + i].x - aa.points[i].x - w).abs() < 1e-12);
        assert_eq!(aa.points[n + i].y, aa.points[i].y);
    }
    assert!(!aa.pen_down[n - 1]);

    let word = build_word_plan("aeiou", &lib, LetterSpacing::Proportional).unwrap();
    let total: usize = "aeiou".chars().map(|c| lib.get(c).unwrap().nodes.len()).sum();
    assert_eq!(word.n_sl(), total);
    assert_eq!(word.pen_down_segments().len(), 5);

    assert!(matches!(
        build_word_plan("axe", &lib, LetterSpacing::Proportional),
        Err(Error::MissingGlyph('x'))
    ));
}

#[test]
fn tagging_is_idempotent() {
    let lib = GlyphLibrary::builtin();
    let plan = build_word_plan("aeiou", &lib, LetterSpacing::Proportional).unwrap();
    let mut again = plan.clone();
    again.retag(&lib.guides, lib.tag_tolerance());
    assert_eq!(again, plan);
    assert!(plan.points.iter().any(|p| p.tag == Some(GuideTag::Upper2)));
    assert!(plan.points.iter().any(|p| p.tag == Some(GuideTag::Lower1)));
}

#[test]
fn library_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lib.glyphs");
    std::fs::write(&path, include_str!("../data/vowels.glyphs")).unwrap();
    let lib = GlyphLibrary::load(&path).unwrap();
    assert_eq!(lib, GlyphLibrary::builtin());
    assert!(matches!(
        GlyphLibrary::load(dir.path().join("missing.glyphs")),
        Err(Error::Io { .. })
    ));
}
