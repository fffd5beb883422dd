use std::collections::VecDeque;

use super::matrix::InteractionMatrix;
use crate::error::{Error, Result};
use crate::scene::{shortest_path, CameraAction, CameraState, N_VIEWPOINTS, N_Z_LEVELS};

/// Weight of the best neighbour's priority in a node's walk score.
pub const LOOKAHEAD: f64 = 0.5;

/// Nodes visited by the greedy walk, in order, starting after `start`, until
/// `count` nodes are produced.
///
/// From the current node the walk moves to the unvisited neighbour `u`
/// maximising `p(u) + LOOKAHEAD * max_{w ~ u} p(w)` (ties to the lowest
/// index). With no unvisited neighbour it jumps to the highest-priority
/// unvisited node among the nearest ones by graph distance; once every node
/// is visited, the visited set resets.
pub fn greedy_walk(matrix: &InteractionMatrix, priorities: &[f64], start: usize, count: usize) -> Result<Vec<usize>> {
    let n = matrix.len();
    if priorities.len() != n {
        return Err(Error::DimensionMismatch(format!("{} priorities for {n} nodes", priorities.len())));
    }
    if start >= n {
        return Err(Error::InvalidArgument(format!("start node {start}")));
    }
    let score = |u: usize| {
        let best = matrix.neighbours(u).map(|w| priorities[w]).fold(f64::NEG_INFINITY, f64::max);
        priorities[u] + LOOKAHEAD * if best.is_finite() { best } else { 0.0 }
    };
    let pick = |cands: &mut dyn Iterator<Item = usize>, key: &dyn Fn(usize) -> f64| {
        let mut best: Option<(usize, f64)> = None;
        for u in cands {
            let k = key(u);
            if best.is_none_or(|(_, b)| k > b) {
                best = Some((u, k));
            }
        }
        best.map(|b| b.0)
    };

    let mut visited = vec![false; n];
    visited[start] = true;
    let mut cur = start;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let next = match pick(&mut matrix.neighbours(cur).filter(|&u| !visited[u]), &score) {
            Some(u) => u,
            None => match nearest_unvisited(matrix, cur, &visited) {
                Some(layer) => pick(&mut layer.into_iter(), &|u| priorities[u]).expect("nonempty layer"),
                None => {
                    visited.iter_mut().for_each(|v| *v = false);
                    visited[cur] = true;
                    continue;
                }
            },
        };
        visited[next] = true;
        out.push(next);
        cur = next;
    }
    Ok(out)
}

/// Unvisited nodes at the smallest graph distance from `from`, ascending.
fn nearest_unvisited(matrix: &InteractionMatrix, from: usize, visited: &[bool]) -> Option<Vec<usize>> {
    let n = matrix.len();
    let mut dist = vec![usize::MAX; n];
    dist[from] = 0;
    let mut queue = VecDeque::from([from]);
    let mut found: Option<(usize, Vec<usize>)> = None;
    while let Some(i) = queue.pop_front() {
        if let Some((d, _)) = &found {
            if dist[i] > *d {
                break;
            }
        }
        if !visited[i] {
            found.get_or_insert((dist[i], Vec::new())).1.push(i);
            continue;
        }
        for j in matrix.neighbours(i) {
            if dist[j] == usize::MAX {
                dist[j] = dist[i] + 1;
                queue.push_back(j);
            }
        }
    }
    found.map(|(_, mut v)| {
        v.sort_unstable();
        v
    })
}

/// Exactly `budget` legal camera actions following the greedy walk from
/// `current`. Each hop is realized by a shortest legal action path.
pub fn plan_actions(
    matrix: &InteractionMatrix,
    priorities: &[f64],
    current: CameraState,
    budget: usize,
) -> Result<Vec<CameraAction>> {
    if budget == 0 {
        return Err(Error::InvalidArgument("budget must be at least 1".into()));
    }
    if matrix.n_xy != N_VIEWPOINTS || matrix.n_z != N_Z_LEVELS {
        return Err(Error::DimensionMismatch("the planner needs the 6 x 4 camera matrix".into()));
    }
    let mut actions = Vec::with_capacity(budget);
    let mut state = current;
    // Each hop costs at least one action, so `budget` hops always suffice.
    for node in greedy_walk(matrix, priorities, current.index(), budget)? {
        let target = CameraState::from_index(node).expect("node within the camera matrix");
        let path = shortest_path(state, target)
            .ok_or_else(|| Error::Internal(format!("no legal path from {state:?} to {target:?}")))?;
        actions.extend(path);
        state = target;
        if actions.len() >= budget {
            break;
        }
    }
    actions.truncate(budget);
    Ok(actions)
}
