//! Effector-independent action plans: the hexagonal target grid, the glyph
//! library and word-level plan concatenation.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};

/// Header line every glyph library file starts with.
pub const GLYPHS_HEADER: &str = "scriptogen-glyphs v1";

const DEFAULT_LIBRARY: &str = include_str!("../data/vowels.glyphs");

/// Offset-hexagonal grid of pen targets. Odd rows are shifted right by half a
/// pitch and rows are `pitch·√3/2` apart, so every node has six equidistant
/// neighbours.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct HexGrid {
    pub n_cols: usize,
    pub n_rows: usize,
    /// Horizontal node spacing in mm.
    pub pitch: f64,
    /// Position of node 0 in mm.
    pub origin: [f64; 2],
}

impl Default for HexGrid {
    fn default() -> Self {
        Self {
            n_cols: 12,
            n_rows: 17,
            pitch: 1.25,
            origin: [0.0, 0.0],
        }
    }
}

impl HexGrid {
    pub fn len(&self) -> usize {
        self.n_cols * self.n_rows
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn row_spacing(&self) -> f64 {
        self.pitch * 3f64.sqrt() / 2.0
    }

    /// Position of node `index` in mm.
    pub fn node_position(&self, index: usize) -> Result<(f64, f64)> {
        if index >= self.len() {
            return Err(Error::NodeIndex {
                index,
                len: self.len(),
            });
        }
        let row = index / self.n_cols;
        let col = index % self.n_cols;
        let shift = if row % 2 == 1 { 0.5 * self.pitch } else { 0.0 };
        Ok((
            self.origin[0] + col as f64 * self.pitch + shift,
            self.origin[1] + row as f64 * self.row_spacing(),
        ))
    }

    fn validate(&self) -> Result<()> {
        if self.n_cols == 0 || self.n_rows == 0 {
            return Err(Error::InvalidInput("grid must have at least one row and column".into()));
        }
        if !(self.pitch > 0.0) || !self.pitch.is_finite() {
            return Err(Error::Domain {
                name: "pitch",
                value: self.pitch,
                reason: "must be finite and > 0",
            });
        }
        Ok(())
    }
}

/// Free-function form of [`HexGrid::node_position`].
pub fn grid_node_position(grid: &HexGrid, index: usize) -> Result<(f64, f64)> {
    grid.node_position(index)
}

/// Worksheet guide lines, as y-coordinates in mm.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct GuideLines {
    pub upper1: f64,
    pub upper2: f64,
    pub lower1: f64,
    pub lower2: f64,
    pub baseline: f64,
    pub corpus_top: f64,
}

impl GuideLines {
    pub fn validate(&self) -> Result<()> {
        let ordered = [
            self.lower2,
            self.lower1,
            self.baseline,
            self.corpus_top,
            self.upper2,
            self.upper1,
        ];
        if ordered.iter().any(|v| !v.is_finite()) || ordered.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(
                "guide lines must satisfy lower2 < lower1 < baseline < corpus_top < upper2 < upper1"
                    .into(),
            ));
        }
        Ok(())
    }

    /// The guide line closest to `y` within `tolerance`, if any.
    pub fn tag(&self, y: f64, tolerance: f64) -> Option<GuideTag> {
        [
            (GuideTag::Upper1, self.upper1),
            (GuideTag::Upper2, self.upper2),
            (GuideTag::Lower1, self.lower1),
            (GuideTag::Lower2, self.lower2),
        ]
        .into_iter()
        .map(|(tag, line)| (tag, (y - line).abs()))
        .filter(|&(_, d)| d <= tolerance)
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(tag, _)| tag)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GuideTag {
    Upper1,
    Upper2,
    Lower1,
    Lower2,
}

impl fmt::Display for GuideTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GuideTag::Upper1 => "upper1",
            GuideTag::Upper2 => "upper2",
            GuideTag::Lower1 => "lower1",
            GuideTag::Lower2 => "lower2",
        })
    }
}

/// The memorised target sequence for one letter.
#[derive(Debug, Clone, PartialEq)]
pub struct GlyphPlan {
    pub letter: char,
    pub nodes: Vec<usize>,
    /// One flag per consecutive node pair.
    pub pen_down: Vec<bool>,
}

impl GlyphPlan {
    pub fn new(letter: char, nodes: Vec<usize>) -> Self {
        let pen_down = vec![true; nodes.len().saturating_sub(1)];
        Self {
            letter,
            nodes,
            pen_down,
        }
    }

    fn validate(&self, grid: &HexGrid) -> Result<()> {
        let invalid = |reason: String| Error::InvalidGlyph {
            letter: self.letter,
            reason,
        };
        if self.nodes.len() < 6 {
            return Err(invalid(format!(
                "needs at least 6 nodes, has {}",
                self.nodes.len()
            )));
        }
        if self.pen_down.len() + 1 != self.nodes.len() {
            return Err(invalid(format!(
                "{} pen flags for {} nodes",
                self.pen_down.len(),
                self.nodes.len()
            )));
        }
        if let Some(&bad) = self.nodes.iter().find(|&&n| n >= grid.len()) {
            return Err(invalid(format!(
                "node {bad} outside the {}-node grid",
                grid.len()
            )));
        }
        for (pair, &down) in self.nodes.windows(2).zip(&self.pen_down) {
            if down && pair[0] == pair[1] {
                return Err(invalid(format!("repeated node {} in a pen-down move", pair[0])));
            }
        }
        Ok(())
    }
}

/// A grid, its guide lines and the glyphs traced on it.
#[derive(Debug, Clone, PartialEq)]
pub struct GlyphLibrary {
    pub grid: HexGrid,
    pub guides: GuideLines,
    glyphs: BTreeMap<char, GlyphPlan>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LibraryFile {
    grid: HexGrid,
    guides: GuideLines,
    #[serde(default)]
    glyph: Vec<GlyphRecord>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GlyphRecord {
    letter: String,
    nodes: Vec<usize>,
    pen_down: Option<Vec<bool>>,
}

impl GlyphLibrary {
    pub fn new(grid: HexGrid, guides: GuideLines, glyphs: Vec<GlyphPlan>) -> Result<Self> {
        grid.validate()?;
        guides.validate()?;
        let mut map = BTreeMap::new();
        for g in glyphs {
            g.validate(&grid)?;
            let letter = g.letter;
            if map.insert(letter, g).is_some() {
                return Err(Error::InvalidGlyph {
                    letter,
                    reason: "defined more than once".into(),
                });
            }
        }
        Ok(Self {
            grid,
            guides,
            glyphs: map,
        })
    }

    /// The vowel library shipped with the crate.
    pub fn builtin() -> Self {
        Self::parse(DEFAULT_LIBRARY).expect("bundled glyph library is valid")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Parses a `scriptogen-glyphs v1` document: the header line followed by a
    /// TOML body with `[grid]`, `[guides]` and `[[glyph]]` tables.
    pub fn parse(text: &str) -> Result<Self> {
        let (first, body) = text.split_once('\n').unwrap_or((text, ""));
        if first.trim() != GLYPHS_HEADER {
            return Err(Error::Parse {
                what: "glyph library",
                line: 1,
                reason: format!("expected header {GLYPHS_HEADER:?}"),
            });
        }
        let file: LibraryFile = toml::from_str(body).map_err(|e| Error::Parse {
            what: "glyph library",
            line: e
                .span()
                .map(|s| 2 + body[..s.start].matches('\n').count())
                .unwrap_or(0),
            reason: e.message().to_string(),
        })?;
        let mut glyphs = Vec::with_capacity(file.glyph.len());
        for rec in file.glyph {
            let mut chars = rec.letter.chars();
            let letter = match (chars.next(), chars.next()) {
                (Some(c), None) => c,
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "glyph letter must be a single character, got {:?}",
                        rec.letter
                    )))
                }
            };
            let mut plan = GlyphPlan::new(letter, rec.nodes);
            if let Some(flags) = rec.pen_down {
                plan.pen_down = flags;
            }
            glyphs.push(plan);
        }
        Self::new(file.grid, file.guides, glyphs)
    }

    pub fn get(&self, letter: char) -> Option<&GlyphPlan> {
        self.glyphs.get(&letter)
    }

    pub fn iter(&self) -> impl Iterator<Item = &GlyphPlan> {
        self.glyphs.values()
    }

    pub fn len(&self) -> usize {
        self.glyphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.glyphs.is_empty()
    }

    /// Tagging tolerance for guide lines: a quarter pitch.
    pub fn tag_tolerance(&self) -> f64 {
        self.grid.pitch / 4.0
    }
}

/// One target of a trajectory plan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanPoint {
    pub x: f64,
    pub y: f64,
    pub tag: Option<GuideTag>,
    /// Index of the glyph (letter position in the word) this point belongs to.
    pub glyph: usize,
}

/// Ordered pen targets for a whole word.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryPlan {
    pub points: Vec<PlanPoint>,
    /// One flag per consecutive point pair; `false` lifts the pen.
    pub pen_down: Vec<bool>,
    /// Letter of each glyph index.
    pub letters: Vec<char>,
}

impl TrajectoryPlan {
    /// Builds a single-glyph, all pen-down plan from raw coordinates.
    pub fn from_points(points: &[(f64, f64)]) -> Self {
        Self {
            points: points
                .iter()
                .map(|&(x, y)| PlanPoint {
                    x,
                    y,
                    tag: None,
                    glyph: 0,
                })
                .collect(),
            pen_down: vec![true; points.len().saturating_sub(1)],
            letters: vec!['?'],
        }
    }

    pub fn n_sl(&self) -> usize {
        self.points.len()
    }

    /// Index ranges `[start, end)` of maximal pen-down runs.
    pub fn pen_down_segments(&self) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::new();
        let mut start = 0;
        for (i, &down) in self.pen_down.iter().enumerate() {
            if !down {
                out.push(start..i + 1);
                start = i + 1;
            }
        }
        if start < self.points.len() {
            out.push(start..self.points.len());
        }
        out
    }

    /// Index ranges `[start, end)` of each glyph's points.
    pub fn glyph_ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut out: Vec<std::ops::Range<usize>> = Vec::new();
        for (i, p) in self.points.iter().enumerate() {
            match out.last_mut() {
                Some(r) if self.points[r.start].glyph == p.glyph => r.end = i + 1,
                _ => out.push(i..i + 1),
            }
        }
        out
    }

    /// Checks flag count and finite coordinates.
    pub fn validate(&self) -> Result<()> {
        if self.pen_down.len() + 1 != self.points.len().max(1) {
            return Err(Error::InvalidInput(format!(
                "plan has {} points but {} pen flags",
                self.points.len(),
                self.pen_down.len()
            )));
        }
        if self.points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::InvalidInput("plan contains non-finite coordinates".into()));
        }
        Ok(())
    }

    /// Whether two consecutive pen-down points coincide.
    pub fn has_repeated_points(&self) -> bool {
        self.points
            .windows(2)
            .zip(&self.pen_down)
            .any(|(pair, &down)| down && pair[0].x == pair[1].x && pair[0].y == pair[1].y)
    }

    /// Re-tags every point against `guides`.
    pub fn retag(&mut self, guides: &GuideLines, tolerance: f64) {
        for p in &mut self.points {
            p.tag = guides.tag(p.y, tolerance);
        }
    }
}

/// Horizontal placement of successive letters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum LetterSpacing {
    /// Each glyph starts one pitch right of the previous glyph's bounding box.
    #[default]
    Proportional,
    /// Each glyph is shifted this many mm right of the previous one.
    Fixed(f64),
}

/// Concatenates glyph plans into a word plan. Letters are joined by pen-up
/// moves.
pub fn build_word_plan(
    word: &str,
    library: &GlyphLibrary,
    spacing: LetterSpacing,
) -> Result<TrajectoryPlan> {
    let grid = &library.grid;
    let tol = library.tag_tolerance();
    let mut plan = TrajectoryPlan {
        points: Vec::new(),
        pen_down: Vec::new(),
        letters: Vec::new(),
    };
    let mut offset = 0.0;
    let mut prev_right: Option<f64> = None;
    for (gi, letter) in word.chars().enumerate() {
        let glyph = library.get(letter).ok_or(Error::MissingGlyph(letter))?;
        let coords = glyph
            .nodes
            .iter()
            .map(|&n| grid.node_position(n))
            .collect::<Result<Vec<_>>>()?;
        let (left, right) = coords
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(x, _)| {
                (lo.min(x), hi.max(x))
            });
        match (spacing, prev_right) {
            (_, None) => {}
            (LetterSpacing::Fixed(w), Some(_)) => offset += w,
            (LetterSpacing::Proportional, Some(pr)) => offset = pr + grid.pitch - left,
        }
        prev_right = Some(right + offset);

        if !plan.points.is_empty() {
            plan.pen_down.push(false);
        }
        plan.pen_down.extend_from_slice(&glyph.pen_down);
        plan.points.extend(coords.iter().map(|&(x, y)| PlanPoint {
            x: x + offset,
            y,
            tag: library.guides.tag(y, tol),
            glyph: gi,
        }));
        plan.letters.push(letter);
    }
    if plan.points.is_empty() {
        return Err(Error::InvalidInput("word is empty".into()));
    }
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_zero_is_origin() {
        let g = HexGrid {
            origin: [3.0, -1.0],
            ..HexGrid::default()
        };
        assert_eq!(g.node_position(0).unwrap(), (3.0, -1.0));
    }

    #[test]
    fn odd_rows_shift_half_pitch() {
        let g = HexGrid::default();
        let (x0, _) = g.node_position(4).unwrap();
        let (x1, _) = g.node_position(g.n_cols + 4).unwrap();
        assert!((x1 - x0 - g.pitch / 2.0).abs() < 1e-12);
    }

    #[test]
    fn two_rows_are_pitch_root3_apart() {
        let g = HexGrid::default();
        let (_, y0) = g.node_position(2).unwrap();
        let (_, y2) = g.node_position(2 * g.n_cols + 2).unwrap();
        assert!((y2 - y0 - g.pitch * 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn out_of_range_node() {
        let g = HexGrid::default();
        assert!(matches!(
            g.node_position(g.len()),
            Err(Error::NodeIndex { .. })
        ));
    }

    #[test]
    fn positions_are_unique() {
        let g = HexGrid::default();
        let mut seen = std::collections::HashSet::new();
        for i in 0..g.len() {
            let (x, y) = g.node_position(i).unwrap();
            assert!(seen.insert(((x * 1e6) as i64, (y * 1e6) as i64)));
        }
    }

    #[test]
    fn builtin_library_has_vowels() {
        let lib = GlyphLibrary::builtin();
        for c in "aeiou".chars() {
            let g = lib.get(c).unwrap();
            assert!(g.nodes.len() >= 25, "{c} has {} nodes", g.nodes.len());
        }
    }

    #[test]
    fn single_letter_word_matches_glyph() {
        let lib = GlyphLibrary::builtin();
        let plan = build_word_plan("a", &lib, LetterSpacing::Proportional).unwrap();
        let glyph = lib.get('a').unwrap();
        assert_eq!(plan.n_sl(), glyph.nodes.len());
        for (p, &n) in plan.points.iter().zip(&glyph.nodes) {
            assert_eq!((p.x, p.y), lib.grid.node_position(n).unwrap());
        }
    }

    #[test]
    fn fixed_advance_translates() {
        let lib = GlyphLibrary::builtin();
        let plan = build_word_plan("aa", &lib, LetterSpacing::Fixed(9.5)).unwrap();
        let n = lib.get('a').unwrap().nodes.len();
        for i in 0..n {
            let (a, b) = (plan.points[i], plan.points[n + i]);
            assert!((b.x - a.x - 9.5).abs() < 1e-12);
            assert_eq!(a.y, b.y);
            assert_eq!(a.tag, b.tag);
        }
        assert!(!plan.pen_down[n - 1]);
        assert_eq!(plan.pen_down_segments().len(), 2);
    }

    #[test]
    fn aeiou_point_count() {
        let lib = GlyphLibrary::builtin();
        let plan = build_word_plan("aeiou", &lib, LetterSpacing::Proportional).unwrap();
        // 33 + 26 + 25 + 28 + 30 nodes in the bundled library.
        assert_eq!(plan.n_sl(), 142);
        assert_eq!(plan.glyph_ranges().len(), 5);
        assert_eq!(plan.letters, vec!['a', 'e', 'i', 'o', 'u']);
        plan.validate().unwrap();
        assert!(!plan.has_repeated_points());
    }

    #[test]
    fn proportional_spacing_leaves_one_pitch_gap() {
        let lib = GlyphLibrary::builtin();
        let plan = build_word_plan("oa", &lib, LetterSpacing::Proportional).unwrap();
        let ranges = plan.glyph_ranges();
        let right0 = plan.points[ranges[0].clone()]
            .iter()
            .map(|p| p.x)
            .fold(f64::MIN, f64::max);
        let left1 = plan.points[ranges[1].clone()]
            .iter()
            .map(|p| p.x)
            .fold(f64::MAX, f64::min);
        assert!((left1 - right0 - lib.grid.pitch).abs() < 1e-9);
    }

    #[test]
    fn unknown_character() {
        let lib = GlyphLibrary::builtin();
        let err = build_word_plan("axe", &lib, LetterSpacing::Proportional).unwrap_err();
        assert!(matches!(err, Error::MissingGlyph('x')));
        assert!(err.to_string().contains("'x'"));
    }

    #[test]
    fn vowels_touch_both_bands() {
        let lib = GlyphLibrary::builtin();
        let plan = build_word_plan("aeiou", &lib, LetterSpacing::Proportional).unwrap();
        for r in plan.glyph_ranges() {
            let tags: Vec<_> = plan.points[r].iter().filter_map(|p| p.tag).collect();
            assert!(tags.contains(&GuideTag::Lower1));
            assert!(tags.contains(&GuideTag::Upper2));
        }
    }

    #[test]
    fn header_is_required() {
        let text = DEFAULT_LIBRARY.replacen(GLYPHS_HEADER, "scriptogen-glyphs v2", 1);
        assert!(matches!(
            GlyphLibrary::parse(&text),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn rejects_short_and_out_of_grid_glyphs() {
        let head = "scriptogen-glyphs v1\n[grid]\nn_cols = 4\nn_rows = 4\npitch = 1.0\norigin = [0.0, 0.0]\n[guides]\nlower2 = 0.0\nlower1 = 0.5\nbaseline = 1.0\ncorpus_top = 2.0\nupper2 = 2.5\nupper1 = 3.0\n";
        let short = format!("{head}[[glyph]]\nletter = \"z\"\nnodes = [0, 1, 2]\n");
        assert!(matches!(
            GlyphLibrary::parse(&short),
            Err(Error::InvalidGlyph { letter: 'z', .. })
        ));
        let outside = format!("{head}[[glyph]]\nletter = \"z\"\nnodes = [0, 1, 2, 3, 4, 99]\n");
        assert!(GlyphLibrary::parse(&outside).is_err());
        let flags = format!(
            "{head}[[glyph]]\nletter = \"z\"\nnodes = [0, 1, 2, 3, 4, 5]\npen_down = [true, true, false, true, true]\n"
        );
        let lib = GlyphLibrary::parse(&flags).unwrap();
        assert_eq!(lib.get('z').unwrap().pen_down[2], false);
    }

    #[test]
    fn tagging_is_translation_invariant_in_x() {
        let lib = GlyphLibrary::builtin();
        let mut plan = build_word_plan("eu", &lib, LetterSpacing::Proportional).unwrap();
        let before: Vec<_> = plan.points.iter().map(|p| p.tag).collect();
        for p in &mut plan.points {
            p.x += 37.0;
        }
        plan.retag(&lib.guides, lib.tag_tolerance());
        let after: Vec<_> = plan.points.iter().map(|p| p.tag).collect();
        assert_eq!(before, after);
        plan.retag(&lib.guides, lib.tag_tolerance());
        assert_eq!(after, plan.points.iter().map(|p| p.tag).collect::<Vec<_>>());
    }
}
