//! Grid maps: obstacles, waypoints, spawn regions, text serialization, and
//! the three bundled presets.
//!
//! Text format: a small header (`name:`, `width:`, `height:`) followed by
//! one row per line. `#` blocked, `.` free, `W` waypoint, `Z` zombie spawn,
//! `H` human spawn. Waypoint and spawn cells are unblocked.

use thiserror::Error;

use crate::types::{Cell, Vec2};

#[derive(Debug, Error)]
pub enum MapError {
    #[error("map parse error: {0}")]
    Parse(String),
    #[error("map `{name}` invalid: {reason}")]
    Invalid { name: String, reason: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArenaMap {
    pub name: String,
    pub width: i32,
    pub height: i32,
    blocked: Vec<bool>,
    pub waypoints: Vec<Vec2>,
    pub zombie_spawns: Vec<Cell>,
    pub human_spawns: Vec<Cell>,
}

impl ArenaMap {
    pub fn in_bounds(&self, cell: Cell) -> bool {
        cell.x >= 0 && cell.y >= 0 && cell.x < self.width && cell.y < self.height
    }

    /// Out-of-bounds counts as blocked.
    pub fn is_blocked(&self, cell: Cell) -> bool {
        if !self.in_bounds(cell) {
            return true;
        }
        self.blocked[(cell.y * self.width + cell.x) as usize]
    }

    pub fn is_free(&self, cell: Cell) -> bool {
        !self.is_blocked(cell)
    }

    pub fn free_cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.height).flat_map(move |y| {
            (0..self.width)
                .map(move |x| Cell::new(x, y))
                .filter(|&c| self.is_free(c))
        })
    }

    /// Straight-line visibility between two points over free cells
    /// (supercover walk: every cell the segment touches must be free).
    pub fn line_of_sight(&self, from: Vec2, to: Vec2) -> bool {
        let dist = from.distance(to);
        if dist < 1e-9 {
            return self.is_free(from.cell());
        }
        let steps = (dist * 4.0).ceil() as usize;
        for i in 0..=steps {
            let t = i as f64 / steps as f64;
            let p = Vec2::new(
                from.x + (to.x - from.x) * t,
                from.y + (to.y - from.y) * t,
            );
            if self.is_blocked(p.cell()) {
                return false;
            }
        }
        true
    }

    /// Checks structural invariants: free spawn/waypoint cells, connected
    /// free region.
    pub fn validate(&self) -> Result<(), MapError> {
        let fail = |reason: String| MapError::Invalid {
            name: self.name.clone(),
            reason,
        };
        if self.width <= 0 || self.height <= 0 {
            return Err(fail("empty grid".into()));
        }
        for wp in &self.waypoints {
            if self.is_blocked(wp.cell()) {
                return Err(fail(format!("waypoint at blocked cell {:?}", wp.cell())));
            }
        }
        for &c in self.zombie_spawns.iter().chain(self.human_spawns.iter()) {
            if self.is_blocked(c) {
                return Err(fail(format!("spawn at blocked cell {c:?}")));
            }
        }
        if self.zombie_spawns.is_empty() || self.human_spawns.is_empty() {
            return Err(fail("both spawn regions must be non-empty".into()));
        }
        if self.waypoints.is_empty() {
            return Err(fail("at least one waypoint required".into()));
        }
        // Connectivity of the free region (4-neighbor flood fill).
        let free: Vec<Cell> = self.free_cells().collect();
        if free.is_empty() {
            return Err(fail("no free cells".into()));
        }
        let mut seen = vec![false; (self.width * self.height) as usize];
        let idx = |c: Cell| (c.y * self.width + c.x) as usize;
        let mut stack = vec![free[0]];
        seen[idx(free[0])] = true;
        let mut count = 0usize;
        while let Some(c) = stack.pop() {
            count += 1;
            for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                let n = Cell::new(c.x + dx, c.y + dy);
                if self.is_free(n) && !seen[idx(n)] {
                    seen[idx(n)] = true;
                    stack.push(n);
                }
            }
        }
        if count != free.len() {
            return Err(fail(format!(
                "free region disconnected ({count} of {} reachable)",
                free.len()
            )));
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("name: {}\n", self.name));
        out.push_str(&format!("width: {}\n", self.width));
        out.push_str(&format!("height: {}\n", self.height));
        for y in 0..self.height {
            for x in 0..self.width {
                let cell = Cell::new(x, y);
                let ch = if self.is_blocked(cell) {
                    '#'
                } else if self.waypoints.iter().any(|w| w.cell() == cell) {
                    'W'
                } else if self.zombie_spawns.contains(&cell) {
                    'Z'
                } else if self.human_spawns.contains(&cell) {
                    'H'
                } else {
                    '.'
                };
                out.push(ch);
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<ArenaMap, MapError> {
        let mut name = None;
        let mut width = None;
        let mut height = None;
        let mut rows: Vec<&str> = Vec::new();
        for line in text.lines() {
            let line = line.trim_end();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("name:") {
                name = Some(rest.trim().to_string());
            } else if let Some(rest) = line.strip_prefix("width:") {
                width = Some(rest.trim().parse::<i32>().map_err(|e| {
                    MapError::Parse(format!("bad width: {e}"))
                })?);
            } else if let Some(rest) = line.strip_prefix("height:") {
                height = Some(rest.trim().parse::<i32>().map_err(|e| {
                    MapError::Parse(format!("bad height: {e}"))
                })?);
            } else {
                rows.push(line);
            }
        }
        let name = name.ok_or_else(|| MapError::Parse("missing name".into()))?;
        let width = width.ok_or_else(|| MapError::Parse("missing width".into()))?;
        let height = height.ok_or_else(|| MapError::Parse("missing height".into()))?;
        if rows.len() != height as usize {
            return Err(MapError::Parse(format!(
                "expected {height} rows, found {}",
                rows.len()
            )));
        }
        let mut blocked = vec![false; (width * height) as usize];
        let mut waypoints = Vec::new();
        let mut zombie_spawns = Vec::new();
        let mut human_spawns = Vec::new();
        for (y, row) in rows.iter().enumerate() {
            let chars: Vec<char> = row.chars().collect();
            if chars.len() != width as usize {
                return Err(MapError::Parse(format!(
                    "row {y} has {} cells, expected {width}",
                    chars.len()
                )));
            }
            for (x, ch) in chars.iter().enumerate() {
                let cell = Cell::new(x as i32, y as i32);
                match ch {
                    '#' => blocked[(cell.y * width + cell.x) as usize] = true,
                    '.' => {}
                    'W' => waypoints.push(cell.center()),
                    'Z' => zombie_spawns.push(cell),
                    'H' => human_spawns.push(cell),
                    other => {
                        return Err(MapError::Parse(format!(
                            "unknown cell `{other}` at ({x}, {y})"
                        )))
                    }
                }
            }
        }
        let map = ArenaMap {
            name,
            width,
            height,
            blocked,
            waypoints,
            zombie_spawns,
            human_spawns,
        }
        .normalize();
        Ok(map)
    }

    pub fn from_file(path: &std::path::Path) -> Result<ArenaMap, MapError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| MapError::Parse(format!("cannot read {}: {e}", path.display())))?;
        let map = ArenaMap::from_text(&text)?;
        map.validate()?;
        Ok(map)
    }

    /// Sorts waypoints and spawn lists row-major so construction order never
    /// leaks into equality or serialization.
    fn normalize(mut self) -> ArenaMap {
        let key = |p: &Vec2| (p.cell().y, p.cell().x);
        self.waypoints.sort_by_key(key);
        self.zombie_spawns.sort_by_key(|c| (c.y, c.x));
        self.human_spawns.sort_by_key(|c| (c.y, c.x));
        self
    }

    /// Bundled presets: `small` (walled-in and cluttered), `medium` (small
    /// tiled 2x2 with the seam walls opened), `large` (open and sparse).
    pub fn preset(name: &str) -> Option<ArenaMap> {
        match name {
            "small" => Some(small_map()),
            "medium" => Some(medium_map()),
            "large" => Some(large_map()),
            _ => None,
        }
    }
}

const SMALL_MAP: &str = "\
name: small
width: 16
height: 16
################
#Z.....##.....H#
#Z.W...##..W..H#
#Z..........####
#...##.........#
#...##...##....#
#.........##.W.#
#..W...........#
#......###.....#
#..##..###..##.#
#..##.......##.#
#.......W......#
#.###..........#
#.###...##..W.H#
#Z......##....H#
################
";

fn small_map() -> ArenaMap {
    let map = ArenaMap::from_text(SMALL_MAP).expect("bundled small map parses");
    map.validate().expect("bundled small map is valid");
    map
}

/// Tiles the small map 2x2 and opens the seam walls between the copies,
/// keeping the outer boundary intact.
fn medium_map() -> ArenaMap {
    let small = small_map();
    let width = small.width * 2;
    let height = small.height * 2;
    let mut blocked = vec![false; (width * height) as usize];
    let mut waypoints = Vec::new();
    let mut zombie_spawns = Vec::new();
    let mut human_spawns = Vec::new();
    for ty in 0..2 {
        for tx in 0..2 {
            let ox = tx * small.width;
            let oy = ty * small.height;
            for y in 0..small.height {
                for x in 0..small.width {
                    if small.is_blocked(Cell::new(x, y)) {
                        blocked[((y + oy) * width + x + ox) as usize] = true;
                    }
                }
            }
            for wp in &small.waypoints {
                waypoints.push(Vec2::new(wp.x + ox as f64, wp.y + oy as f64));
            }
            for &c in &small.zombie_spawns {
                zombie_spawns.push(Cell::new(c.x + ox, c.y + oy));
            }
            for &c in &small.human_spawns {
                human_spawns.push(Cell::new(c.x + ox, c.y + oy));
            }
        }
    }
    // Open the interior seam rows/columns contributed by the copies' border
    // walls; the outer ring stays walled.
    for y in 1..height - 1 {
        for &x in &[small.width - 1, small.width] {
            blocked[(y * width + x) as usize] = false;
        }
    }
    for x in 1..width - 1 {
        for &y in &[small.height - 1, small.height] {
            blocked[(y * width + x) as usize] = false;
        }
    }
    let map = ArenaMap {
        name: "medium".into(),
        width,
        height,
        blocked,
        waypoints,
        zombie_spawns,
        human_spawns,
    }
    .normalize();
    map.validate().expect("bundled medium map is valid");
    map
}

/// 48x48 sparse outdoor arena: border wall, a few large blocks, scattered
/// single-cell obstacles.
fn large_map() -> ArenaMap {
    let width = 48;
    let height = 48;
    let mut blocked = vec![false; (width * height) as usize];
    let mut set = |x: i32, y: i32| blocked[(y * width + x) as usize] = true;
    for x in 0..width {
        set(x, 0);
        set(x, height - 1);
    }
    for y in 0..height {
        set(0, y);
        set(width - 1, y);
    }
    // Buildings.
    for (bx, by, w, h) in [(8, 8, 5, 4), (30, 12, 6, 5), (14, 30, 4, 6), (33, 33, 5, 4)] {
        for y in by..by + h {
            for x in bx..bx + w {
                set(x, y);
            }
        }
    }
    // Rocks.
    for (bx, by) in [(22, 20), (10, 20), (38, 24), (24, 40), (40, 6)] {
        for y in by..by + 2 {
            for x in bx..bx + 2 {
                set(x, y);
            }
        }
    }
    // Trees.
    for (x, y) in [
        (5, 14),
        (18, 5),
        (26, 9),
        (6, 33),
        (20, 26),
        (29, 28),
        (43, 18),
        (36, 42),
        (12, 42),
        (44, 38),
    ] {
        set(x, y);
    }
    let waypoints = [
        (4, 4),
        (24, 4),
        (43, 4),
        (4, 24),
        (24, 24),
        (43, 24),
        (4, 43),
        (24, 43),
        (43, 43),
    ]
    .into_iter()
    .map(|(x, y)| Cell::new(x, y).center())
    .collect();
    let zombie_spawns = (0..10).map(|i| Cell::new(2 + i * 4, 2)).collect();
    let human_spawns = (0..6).map(|i| Cell::new(4 + i * 7, 45)).collect();
    let map = ArenaMap {
        name: "large".into(),
        width,
        height,
        blocked,
        waypoints,
        zombie_spawns,
        human_spawns,
    }
    .normalize();
    map.validate().expect("bundled large map is valid");
    map
}
