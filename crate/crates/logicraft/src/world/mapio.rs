//! ASCII map format: one character per cell.
//!
//! `#` wall, `.` empty, `w` wood, `g` grass, `i` iron, `t` toolshed,
//! `b` workbench, `f` factory, `s` shelter, digits `1..9` agent start poses
//! (on empty cells). Loader and saver are inverse functions.

use super::{AgentPose, GridMap, ObjectKind, WorldError};

fn kind_to_char(kind: ObjectKind) -> char {
    match kind {
        ObjectKind::Wall => '#',
        ObjectKind::Empty => '.',
        ObjectKind::Wood => 'w',
        ObjectKind::Grass => 'g',
        ObjectKind::Iron => 'i',
        ObjectKind::Toolshed => 't',
        ObjectKind::Workbench => 'b',
        ObjectKind::Factory => 'f',
        ObjectKind::Shelter => 's',
    }
}

fn kind_from_char(c: char) -> Option<ObjectKind> {
    Some(match c {
        '#' => ObjectKind::Wall,
        '.' => ObjectKind::Empty,
        'w' => ObjectKind::Wood,
        'g' => ObjectKind::Grass,
        'i' => ObjectKind::Iron,
        't' => ObjectKind::Toolshed,
        'b' => ObjectKind::Workbench,
        'f' => ObjectKind::Factory,
        's' => ObjectKind::Shelter,
        _ => return None,
    })
}

/// Renders a map in the ASCII format, with a trailing newline.
pub fn map_to_ascii(map: &GridMap) -> String {
    let mut out = String::with_capacity((map.width + 1) * map.height);
    for y in 0..map.height {
        for x in 0..map.width {
            let here = map
                .starts
                .iter()
                .position(|s| s.x == x && s.y == y)
                .map(|i| char::from_digit(i as u32 + 1, 10).expect("at most 9 agents"));
            match here {
                Some(d) => out.push(d),
                None => out.push(kind_to_char(map.kind_at(x, y))),
            }
        }
        out.push('\n');
    }
    out
}

/// Parses a map from the ASCII format.
pub fn map_from_ascii(text: &str) -> Result<GridMap, WorldError> {
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    let height = lines.len();
    if height == 0 {
        return Err(WorldError::TooSmall {
            width: 0,
            height: 0,
        });
    }
    let width = lines[0].chars().count();
    let mut cells = Vec::with_capacity(width * height);
    let mut marked: Vec<(usize, AgentPose)> = Vec::new();
    for (y, line) in lines.iter().enumerate() {
        if line.chars().count() != width {
            return Err(WorldError::RaggedMap);
        }
        for (x, c) in line.chars().enumerate() {
            if let Some(d) = c.to_digit(10) {
                if d == 0 {
                    return Err(WorldError::BadMapChar(c, y + 1, x + 1));
                }
                marked.push((d as usize - 1, AgentPose { x, y }));
                cells.push(ObjectKind::Empty);
            } else if let Some(kind) = kind_from_char(c) {
                cells.push(kind);
            } else {
                return Err(WorldError::BadMapChar(c, y + 1, x + 1));
            }
        }
    }
    marked.sort_by_key(|(i, _)| *i);
    let mut starts = Vec::with_capacity(marked.len());
    for (want, (idx, pose)) in marked.into_iter().enumerate() {
        if idx != want {
            return Err(WorldError::BadStartMarkers);
        }
        starts.push(pose);
    }
    GridMap::new(width, height, cells, starts, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = concat!(
        "#######\n",
        "#1.w.g#\n",
        "#..t..#\n",
        "#b...f#\n",
        "#.s.i.#\n",
        "#....2#\n",
        "#######\n",
    );

    #[test]
    fn load_then_save_is_identity() {
        let map = map_from_ascii(SAMPLE).unwrap();
        assert_eq!(map_to_ascii(&map), SAMPLE);
    }

    #[test]
    fn save_then_load_is_identity() {
        let map = map_from_ascii(SAMPLE).unwrap();
        let reloaded = map_from_ascii(&map_to_ascii(&map)).unwrap();
        assert_eq!(map, reloaded);
    }

    #[test]
    fn rejects_unknown_characters() {
        let bad = "###\n#z#\n###\n";
        assert!(matches!(
            map_from_ascii(bad),
            Err(WorldError::BadMapChar('z', 2, 2))
        ));
    }

    #[test]
    fn rejects_gapped_start_markers() {
        let bad = "####\n#13#\n####\n";
        assert!(matches!(
            map_from_ascii(bad),
            Err(WorldError::BadStartMarkers)
        ));
    }

    #[test]
    fn rejects_open_borders() {
        let bad = "###\n#1.\n###\n";
        assert!(matches!(map_from_ascii(bad), Err(WorldError::OpenBorder)));
    }

    #[test]
    fn rejects_ragged_rows() {
        let bad = "####\n#1#\n####\n";
        assert!(matches!(map_from_ascii(bad), Err(WorldError::RaggedMap)));
    }
}
