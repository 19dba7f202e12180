//! Shortest paths on the obstacle grid: 8-connected A* with diagonal cost
//! sqrt(2) and no corner cutting (a diagonal step requires both adjacent
//! orthogonal cells to be free).
//!
//! Costs are tracked as exact (straight, diagonal) step counts so distinct
//! search implementations can compare costs without float drift.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::arena::map::ArenaMap;
use crate::types::Cell;

pub const SQRT_2: f64 = std::f64::consts::SQRT_2;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PathError {
    #[error("path start {0:?} is blocked")]
    BlockedStart(Cell),
}

/// Exact path cost as step counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathCost {
    pub straight: u32,
    pub diagonal: u32,
}

impl PathCost {
    pub fn as_f64(self) -> f64 {
        self.straight as f64 + self.diagonal as f64 * SQRT_2
    }
}

/// A path: the cells to traverse after the start cell, goal included.
/// `from == to` yields an empty path.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    pub cells: Vec<Cell>,
    pub cost: PathCost,
}

const NEIGHBORS: [(i32, i32); 8] = [
    (1, 0),
    (-1, 0),
    (0, 1),
    (0, -1),
    (1, 1),
    (1, -1),
    (-1, 1),
    (-1, -1),
];

fn step_allowed(map: &ArenaMap, from: Cell, dx: i32, dy: i32) -> Option<Cell> {
    let next = Cell::new(from.x + dx, from.y + dy);
    if map.is_blocked(next) {
        return None;
    }
    if dx != 0 && dy != 0 {
        // No corner cutting.
        if map.is_blocked(Cell::new(from.x + dx, from.y))
            || map.is_blocked(Cell::new(from.x, from.y + dy))
        {
            return None;
        }
    }
    Some(next)
}

#[derive(PartialEq)]
struct Frontier {
    f: f64,
    g: f64,
    order: u64,
    cell: Cell,
}

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap on f, then g, then insertion order for determinism.
        other
            .f
            .partial_cmp(&self.f)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.g.partial_cmp(&self.g).unwrap_or(Ordering::Equal))
            .then_with(|| other.order.cmp(&self.order))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn octile(a: Cell, b: Cell) -> f64 {
    let dx = (a.x - b.x).abs() as f64;
    let dy = (a.y - b.y).abs() as f64;
    let (lo, hi) = if dx < dy { (dx, dy) } else { (dy, dx) };
    (hi - lo) + lo * SQRT_2
}

/// A* shortest path. `Ok(None)` when the goal is unreachable or blocked.
pub fn find_path(map: &ArenaMap, from: Cell, to: Cell) -> Result<Option<Path>, PathError> {
    if map.is_blocked(from) {
        return Err(PathError::BlockedStart(from));
    }
    if from == to {
        return Ok(Some(Path {
            cells: Vec::new(),
            cost: PathCost {
                straight: 0,
                diagonal: 0,
            },
        }));
    }
    if map.is_blocked(to) {
        return Ok(None);
    }

    let idx = |c: Cell| (c.y * map.width + c.x) as usize;
    let size = (map.width * map.height) as usize;
    let mut best: Vec<Option<PathCost>> = vec![None; size];
    let mut parent: Vec<Option<Cell>> = vec![None; size];
    let mut closed = vec![false; size];
    let mut heap = BinaryHeap::new();
    let mut order = 0u64;

    best[idx(from)] = Some(PathCost {
        straight: 0,
        diagonal: 0,
    });
    heap.push(Frontier {
        f: octile(from, to),
        g: 0.0,
        order,
        cell: from,
    });

    while let Some(Frontier { cell, .. }) = heap.pop() {
        if closed[idx(cell)] {
            continue;
        }
        closed[idx(cell)] = true;
        if cell == to {
            let mut cells = Vec::new();
            let mut cur = to;
            while cur != from {
                cells.push(cur);
                cur = parent[idx(cur)].expect("path chain");
            }
            cells.reverse();
            return Ok(Some(Path {
                cells,
                cost: best[idx(to)].expect("goal cost"),
            }));
        }
        let here = best[idx(cell)].expect("expanded cell has cost");
        for (dx, dy) in NEIGHBORS {
            let Some(next) = step_allowed(map, cell, dx, dy) else {
                continue;
            };
            if closed[idx(next)] {
                continue;
            }
            let cand = if dx != 0 && dy != 0 {
                PathCost {
                    straight: here.straight,
                    diagonal: here.diagonal + 1,
                }
            } else {
                PathCost {
                    straight: here.straight + 1,
                    diagonal: here.diagonal,
                }
            };
            let better = match best[idx(next)] {
                None => true,
                Some(prev) => cand.as_f64() < prev.as_f64() - 1e-12,
            };
            if better {
                best[idx(next)] = Some(cand);
                parent[idx(next)] = Some(cell);
                order += 1;
                heap.push(Frontier {
                    f: cand.as_f64() + octile(next, to),
                    g: cand.as_f64(),
                    order,
                    cell: next,
                });
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn open_map(w: i32, h: i32) -> ArenaMap {
        let mut text = format!("name: t\nwidth: {w}\nheight: {h}\n");
        for y in 0..h {
            for x in 0..w {
                text.push(match (x, y) {
                    (0, 0) => 'Z',
                    (1, 0) => 'H',
                    (2, 0) => 'W',
                    _ => '.',
                });
            }
            text.push('\n');
        }
        ArenaMap::from_text(&text).unwrap()
    }

    /// Independent slow oracle: Bellman-Ford-style relaxation with the same
    /// neighbor rule, exact integer cost pairs.
    pub(crate) fn brute_force_cost(map: &ArenaMap, from: Cell, to: Cell) -> Option<PathCost> {
        if map.is_blocked(from) || map.is_blocked(to) {
            return None;
        }
        let size = (map.width * map.height) as usize;
        let idx = |c: Cell| (c.y * map.width + c.x) as usize;
        let mut dist: Vec<Option<PathCost>> = vec![None; size];
        dist[idx(from)] = Some(PathCost {
            straight: 0,
            diagonal: 0,
        });
        loop {
            let mut changed = false;
            for y in 0..map.height {
                for x in 0..map.width {
                    let c = Cell::new(x, y);
                    let Some(d) = dist[idx(c)] else { continue };
                    for (dx, dy) in NEIGHBORS {
                        let Some(n) = step_allowed(map, c, dx, dy) else {
                            continue;
                        };
                        let cand = if dx != 0 && dy != 0 {
                            PathCost {
                                straight: d.straight,
                                diagonal: d.diagonal + 1,
                            }
                        } else {
                            PathCost {
                                straight: d.straight + 1,
                                diagonal: d.diagonal,
                            }
                        };
                        let better = match dist[idx(n)] {
                            None => true,
                            Some(prev) => cand.as_f64() < prev.as_f64() - 1e-12,
                        };
                        if better {
                            dist[idx(n)] = Some(cand);
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        dist[idx(to)]
    }

    #[test]
    fn trivial_and_diagonal_paths() {
        let map = open_map(5, 5);
        let p = find_path(&map, Cell::new(2, 2), Cell::new(2, 2)).unwrap().unwrap();
        assert!(p.cells.is_empty());
        assert_eq!(p.cost.as_f64(), 0.0);

        let p = find_path(&map, Cell::new(0, 0), Cell::new(4, 4)).unwrap().unwrap();
        assert_eq!(p.cost, PathCost { straight: 0, diagonal: 4 });
        assert_eq!(p.cost.as_f64(), 4.0 * SQRT_2);
        assert_eq!(p.cells.len(), 4);
    }

    #[test]
    fn blocked_start_is_error() {
        let text = "name: t\nwidth: 3\nheight: 3\n#ZW\n.H.\n...\n";
        let map = ArenaMap::from_text(text).unwrap();
        assert_eq!(
            find_path(&map, Cell::new(0, 0), Cell::new(2, 2)),
            Err(PathError::BlockedStart(Cell::new(0, 0)))
        );
    }

    #[test]
    fn unreachable_goal_is_none() {
        let text = "name: t\nwidth: 5\nheight: 3\nZ.#.W\nH.#..\n..#..\n";
        let map = ArenaMap::from_text(text).unwrap();
        assert_eq!(find_path(&map, Cell::new(0, 0), Cell::new(4, 0)).unwrap(), None);
    }

    #[test]
    fn no_corner_cutting() {
        // Wall corner: moving diagonally past it is forbidden, so the best
        // route costs 2 straight steps.
        let text = "name: t\nwidth: 3\nheight: 3\nZ#W\n.H.\n...\n";
        let map = ArenaMap::from_text(text).unwrap();
        // (0,0) -> (1,1): the diagonal needs (1,0) and (0,1) free, and (1,0)
        // is the wall, so the route is two straight steps.
        let p = find_path(&map, Cell::new(0, 0), Cell::new(1, 1)).unwrap().unwrap();
        assert_eq!(p.cost, PathCost { straight: 2, diagonal: 0 });
        let p = find_path(&map, Cell::new(0, 0), Cell::new(2, 0)).unwrap().unwrap();
        assert_eq!(
            brute_force_cost(&map, Cell::new(0, 0), Cell::new(2, 0)).unwrap(),
            p.cost
        );
    }

    #[test]
    fn random_maps_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for round in 0..100 {
            let w = rng.gen_range(4..=12);
            let h = rng.gen_range(4..=12);
            let mut text = format!("name: t\nwidth: {w}\nheight: {h}\n");
            let mut free = Vec::new();
            for y in 0..h {
                for x in 0..w {
                    if rng.gen::<f64>() < 0.25 {
                        text.push('#');
                    } else {
                        text.push('.');
                        free.push(Cell::new(x, y));
                    }
                }
                text.push('\n');
            }
            if free.len() < 2 {
                continue;
            }
            let map = ArenaMap::from_text(&text).unwrap();
            for _ in 0..5 {
                let from = free[rng.gen_range(0..free.len())];
                let to = free[rng.gen_range(0..free.len())];
                let fast = find_path(&map, from, to).unwrap().map(|p| p.cost);
                let slow = brute_force_cost(&map, from, to);
                assert_eq!(fast, slow, "round {round}: {from:?} -> {to:?}\n{text}");
            }
        }
    }

    #[test]
    fn path_cells_are_free_and_adjacent() {
        let map = ArenaMap::preset("small").unwrap();
        let p = find_path(&map, Cell::new(1, 1), Cell::new(14, 13))
            .unwrap()
            .unwrap();
        let mut prev = Cell::new(1, 1);
        for &c in &p.cells {
            assert!(map.is_free(c));
            assert!((c.x - prev.x).abs() <= 1 && (c.y - prev.y).abs() <= 1);
            prev = c;
        }
        assert_eq!(prev, Cell::new(14, 13));
    }
}
