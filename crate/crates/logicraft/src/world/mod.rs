//! Deterministic multi-agent crafting gridworld.
//!
//! Agents move on a walled grid containing raw materials (wood, grass, iron),
//! tools (toolshed, workbench, factory), and a shelter. Entering a cell
//! triggers events: materials emit `got_*` once and are consumed, tools emit
//! `used_*` on every visit. The clock starts at 5:00 and advances one hour
//! every ten joint steps; `is_night` holds from 21:00, and `at_shelter` holds
//! when every agent stands on a shelter cell.

mod gen;
mod mapio;

pub use gen::{adversarial_select, random_map, solution_costs, ObjectCounts};
pub use mapio::{map_from_ascii, map_to_ascii};

use crate::ltl::{LabelSet, Proposition};
use crate::Real;

#[derive(Debug, thiserror::Error)]
pub enum WorldError {
    #[error("expected {expected} actions, got {got}")]
    WrongActionCount { expected: usize, got: usize },
    #[error("{objects} objects plus {agents} agents exceed the {interior} interior cells")]
    Overfull {
        objects: usize,
        agents: usize,
        interior: usize,
    },
    #[error("map must be at least 3x3, got {width}x{height}")]
    TooSmall { width: usize, height: usize },
    #[error("bad map character {0:?} at line {1}, column {2}")]
    BadMapChar(char, usize, usize),
    #[error("map rows have unequal lengths")]
    RaggedMap,
    #[error("agent start markers must be 1..=n without gaps")]
    BadStartMarkers,
    #[error("map has no agent start positions")]
    NoStarts,
    #[error("agent start at ({0}, {1}) is not on an empty cell")]
    StartNotEmpty(usize, usize),
    #[error("map border must be wall")]
    OpenBorder,
    #[error("task needs propositions the map cannot produce: {0}")]
    UnsupportedTask(String),
    #[error("no candidate map supports the task")]
    NoViableCandidate,
}

/// Everything a grid cell can hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObjectKind {
    Wood,
    Grass,
    Iron,
    Toolshed,
    Workbench,
    Factory,
    Shelter,
    Wall,
    Empty,
}

impl ObjectKind {
    /// The seven placeable kinds, in the frozen feature/registry order.
    pub const PLACEABLE: [ObjectKind; 7] = [
        ObjectKind::Wood,
        ObjectKind::Grass,
        ObjectKind::Iron,
        ObjectKind::Toolshed,
        ObjectKind::Workbench,
        ObjectKind::Factory,
        ObjectKind::Shelter,
    ];

    pub fn is_material(self) -> bool {
        matches!(self, ObjectKind::Wood | ObjectKind::Grass | ObjectKind::Iron)
    }

    pub fn is_tool(self) -> bool {
        matches!(
            self,
            ObjectKind::Toolshed | ObjectKind::Workbench | ObjectKind::Factory
        )
    }

    /// The event proposition a visit to this cell contributes to, if any.
    /// Shelter participates through the joint `at_shelter` event instead.
    pub fn event_proposition(self) -> Option<Proposition> {
        let name = match self {
            ObjectKind::Wood => "got_wood",
            ObjectKind::Grass => "got_grass",
            ObjectKind::Iron => "got_iron",
            ObjectKind::Toolshed => "used_toolshed",
            ObjectKind::Workbench => "used_workbench",
            ObjectKind::Factory => "used_factory",
            _ => return None,
        };
        Some(Proposition::new(name).expect("static name"))
    }

    /// The kind an agent must reach to make `prop` true, if `prop` is
    /// location-bound. `is_night` is clock-bound and has no kind.
    pub fn for_proposition(prop: &Proposition) -> Option<ObjectKind> {
        match prop.name() {
            "got_wood" => Some(ObjectKind::Wood),
            "got_grass" => Some(ObjectKind::Grass),
            "got_iron" => Some(ObjectKind::Iron),
            "used_toolshed" => Some(ObjectKind::Toolshed),
            "used_workbench" => Some(ObjectKind::Workbench),
            "used_factory" => Some(ObjectKind::Factory),
            "at_shelter" => Some(ObjectKind::Shelter),
            _ => None,
        }
    }
}

/// All propositions the event detector can emit, in the frozen order used
/// for goal indexing and one-hot encodings.
pub fn registered_propositions() -> Vec<Proposition> {
    [
        "got_wood",
        "got_grass",
        "got_iron",
        "used_toolshed",
        "used_workbench",
        "used_factory",
        "at_shelter",
        "is_night",
    ]
    .iter()
    .map(|n| Proposition::new(n).expect("static name"))
    .collect()
}

/// Hour on the 24h-style clock after `step_count` joint steps. Ten steps per
/// hour, starting at 5:00; the value keeps counting past midnight.
pub fn hour(step_count: u64) -> u64 {
    5 + step_count / 10
}

/// Hour from which `is_night` holds.
pub const NIGHT_HOUR: u64 = 21;

/// One agent's grid position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct AgentPose {
    pub x: usize,
    pub y: usize,
}

/// A primitive movement action. `Up` decreases `y` (row 0 is the top row).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    Up,
    Down,
    Left,
    Right,
}

impl Action {
    pub const ALL: [Action; 4] = [Action::Up, Action::Down, Action::Left, Action::Right];

    pub fn index(self) -> usize {
        match self {
            Action::Up => 0,
            Action::Down => 1,
            Action::Left => 2,
            Action::Right => 3,
        }
    }

    pub fn from_index(i: usize) -> Action {
        Action::ALL[i]
    }

    fn delta(self) -> (isize, isize) {
        match self {
            Action::Up => (0, -1),
            Action::Down => (0, 1),
            Action::Left => (-1, 0),
            Action::Right => (1, 0),
        }
    }
}

/// Static map: dimensions, cell contents, and agent start poses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridMap {
    pub width: usize,
    pub height: usize,
    cells: Vec<ObjectKind>,
    pub starts: Vec<AgentPose>,
    pub seed: u64,
}

impl GridMap {
    pub fn new(
        width: usize,
        height: usize,
        cells: Vec<ObjectKind>,
        starts: Vec<AgentPose>,
        seed: u64,
    ) -> Result<Self, WorldError> {
        if width < 3 || height < 3 {
            return Err(WorldError::TooSmall { width, height });
        }
        assert_eq!(cells.len(), width * height, "cell buffer size");
        let map = GridMap {
            width,
            height,
            cells,
            starts,
            seed,
        };
        map.validate()?;
        Ok(map)
    }

    fn validate(&self) -> Result<(), WorldError> {
        for x in 0..self.width {
            if self.kind_at(x, 0) != ObjectKind::Wall
                || self.kind_at(x, self.height - 1) != ObjectKind::Wall
            {
                return Err(WorldError::OpenBorder);
            }
        }
        for y in 0..self.height {
            if self.kind_at(0, y) != ObjectKind::Wall
                || self.kind_at(self.width - 1, y) != ObjectKind::Wall
            {
                return Err(WorldError::OpenBorder);
            }
        }
        if self.starts.is_empty() {
            return Err(WorldError::NoStarts);
        }
        for s in &self.starts {
            if s.x >= self.width || s.y >= self.height {
                return Err(WorldError::StartNotEmpty(s.x, s.y));
            }
            if self.kind_at(s.x, s.y) != ObjectKind::Empty {
                return Err(WorldError::StartNotEmpty(s.x, s.y));
            }
        }
        Ok(())
    }

    pub fn kind_at(&self, x: usize, y: usize) -> ObjectKind {
        self.cells[y * self.width + x]
    }

    pub fn cells(&self) -> &[ObjectKind] {
        &self.cells
    }

    /// Cells of the given kind, in row-major order.
    pub fn cells_of_kind(&self, kind: ObjectKind) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for y in 0..self.height {
            for x in 0..self.width {
                if self.kind_at(x, y) == kind {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// True when the map can produce every location-bound proposition of the
    /// set (at least one instance of each required kind).
    pub fn supports(&self, props: &std::collections::BTreeSet<Proposition>) -> bool {
        props.iter().all(|p| match ObjectKind::for_proposition(p) {
            Some(kind) => self.cells.contains(&kind),
            None => p.name() == "is_night",
        })
    }
}

/// The joint Markov state: map snapshot, agent poses, step clock.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorldState {
    pub map: GridMap,
    pub agents: Vec<AgentPose>,
    pub step_count: u64,
}

impl WorldState {
    /// Initial state: agents at the map's start poses, clock at zero.
    pub fn initial(map: &GridMap) -> WorldState {
        WorldState {
            map: map.clone(),
            agents: map.starts.clone(),
            step_count: 0,
        }
    }

    pub fn num_agents(&self) -> usize {
        self.agents.len()
    }

    pub fn hour(&self) -> u64 {
        hour(self.step_count)
    }

    /// Label of the current state, without taking a step. Used for the
    /// initial observation; movement events only arise from [`step`].
    pub fn current_label(&self) -> LabelSet {
        let mut label = LabelSet::empty();
        self.add_clock_and_shelter(&mut label);
        label
    }

    fn add_clock_and_shelter(&self, label: &mut LabelSet) {
        if self.hour() >= NIGHT_HOUR {
            label.insert(Proposition::new("is_night").expect("static name"));
        }
        let all_sheltered = self
            .agents
            .iter()
            .all(|a| self.map.kind_at(a.x, a.y) == ObjectKind::Shelter);
        if all_sheltered {
            label.insert(Proposition::new("at_shelter").expect("static name"));
        }
    }

    /// Advances every agent one cell (blocked moves keep the pose), consumes
    /// entered materials, and returns the next state with the global label
    /// set it emits.
    pub fn step(&self, actions: &[Action]) -> Result<(WorldState, LabelSet), WorldError> {
        if actions.len() != self.agents.len() {
            return Err(WorldError::WrongActionCount {
                expected: self.agents.len(),
                got: actions.len(),
            });
        }
        let mut next = self.clone();
        next.step_count += 1;
        for (agent, action) in next.agents.iter_mut().zip(actions) {
            let (dx, dy) = action.delta();
            let nx = agent.x as isize + dx;
            let ny = agent.y as isize + dy;
            if nx < 0 || ny < 0 || nx as usize >= self.map.width || ny as usize >= self.map.height
            {
                continue;
            }
            let (nx, ny) = (nx as usize, ny as usize);
            if self.map.kind_at(nx, ny) == ObjectKind::Wall {
                continue;
            }
            agent.x = nx;
            agent.y = ny;
        }
        let mut label = LabelSet::empty();
        for i in 0..next.agents.len() {
            let AgentPose { x, y } = next.agents[i];
            let kind = next.map.kind_at(x, y);
            if let Some(p) = kind.event_proposition() {
                label.insert(p);
            }
            if kind.is_material() {
                next.map.cells[y * next.map.width + x] = ObjectKind::Empty;
            }
        }
        next.add_clock_and_shelter(&mut label);
        Ok((next, label))
    }

    /// Feature vector for one agent. Layout (length `7 + 2*(N-1) + 1`):
    ///
    /// * `[0..7)`: Manhattan distance to the nearest wood, grass, iron,
    ///   toolshed, workbench, factory, shelter; `-1` when none remain.
    /// * then, per other agent in index order: `(their x - my x, their y - my y)`.
    /// * last: clock hour normalized as `(hour - 5) / 24`, clamped to `[0, 1]`.
    pub fn features(&self, agent_index: usize) -> Vec<Real> {
        let me = self.agents[agent_index];
        let mut out = Vec::with_capacity(7 + 2 * (self.agents.len() - 1) + 1);
        for kind in ObjectKind::PLACEABLE {
            let mut best: Option<usize> = None;
            for y in 0..self.map.height {
                for x in 0..self.map.width {
                    if self.map.kind_at(x, y) == kind {
                        let d = me.x.abs_diff(x) + me.y.abs_diff(y);
                        best = Some(best.map_or(d, |b: usize| b.min(d)));
                    }
                }
            }
            out.push(best.map_or(-1.0, |d| d as Real));
        }
        for (i, other) in self.agents.iter().enumerate() {
            if i == agent_index {
                continue;
            }
            out.push(other.x as Real - me.x as Real);
            out.push(other.y as Real - me.y as Real);
        }
        let clock = (self.hour().saturating_sub(5)) as Real / 24.0;
        out.push(clock.min(1.0));
        out
    }

    /// Length of the vector [`features`] returns.
    pub fn feature_len(num_agents: usize) -> usize {
        7 + 2 * (num_agents - 1) + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_map() -> GridMap {
        // 5x5, wood right of the first start, toolshed in the corner area.
        map_from_ascii(concat!(
            "#####\n",
            "#1w.#\n",
            "#.2.#\n",
            "#t.s#\n",
            "#####\n",
        ))
        .unwrap()
    }

    #[test]
    fn stepping_onto_wood_emits_got_wood_and_consumes_the_cell() {
        let map = tiny_map();
        let state = WorldState::initial(&map);
        let (next, label) = state.step(&[Action::Right, Action::Up]).unwrap();
        assert!(label.contains(&Proposition::new("got_wood").unwrap()));
        assert_eq!(next.map.kind_at(2, 1), ObjectKind::Empty);
        // Second entry produces nothing: the material is gone.
        let (_, label2) = next.step(&[Action::Left, Action::Right]).unwrap();
        assert!(!label2.contains(&Proposition::new("got_wood").unwrap()));
    }

    #[test]
    fn no_events_means_empty_label() {
        let map = tiny_map();
        let state = WorldState::initial(&map);
        let (_, label) = state.step(&[Action::Down, Action::Right]).unwrap();
        assert!(label.is_empty());
    }

    #[test]
    fn blocked_moves_keep_the_pose_but_advance_the_clock() {
        let map = tiny_map();
        let state = WorldState::initial(&map);
        let (next, _) = state.step(&[Action::Up, Action::Right]).unwrap();
        assert_eq!(next.agents[0], AgentPose { x: 1, y: 1 });
        assert_eq!(next.step_count, 1);
    }

    #[test]
    fn tool_cells_emit_on_every_visit() {
        let map = tiny_map();
        let state = WorldState::initial(&map);
        let used = Proposition::new("used_toolshed").unwrap();
        let (s1, l1) = state.step(&[Action::Down, Action::Left]).unwrap();
        assert!(!l1.contains(&used));
        let (s2, l2) = s1.step(&[Action::Down, Action::Down]).unwrap();
        assert!(l2.contains(&used));
        let (s3, l3) = s2.step(&[Action::Up, Action::Up]).unwrap();
        assert!(!l3.contains(&used));
        let (_, l4) = s3.step(&[Action::Down, Action::Down]).unwrap();
        assert!(l4.contains(&used), "tools emit again on re-entry");
    }

    #[test]
    fn night_starts_at_hour_21() {
        assert_eq!(hour(0), 5);
        assert_eq!(hour(159), 20);
        assert_eq!(hour(160), 21);
        let map = tiny_map();
        let mut state = WorldState::initial(&map);
        state.step_count = 159;
        let (_, label) = state.step(&[Action::Up, Action::Up]).unwrap();
        assert!(label.contains(&Proposition::new("is_night").unwrap()));
    }

    #[test]
    fn at_shelter_requires_every_agent() {
        let map = map_from_ascii(concat!(
            "#####\n",
            "#1s.#\n",
            "#.s2#\n",
            "#.s.#\n",
            "#####\n",
        ))
        .unwrap();
        let state = WorldState::initial(&map);
        let at_shelter = Proposition::new("at_shelter").unwrap();
        let (s1, l1) = state.step(&[Action::Right, Action::Down]).unwrap();
        assert!(!l1.contains(&at_shelter), "only one agent sheltered");
        let (_, l2) = s1.step(&[Action::Down, Action::Up]).unwrap();
        let (_, l3) = s1.step(&[Action::Down, Action::Left]).unwrap();
        assert!(!l2.contains(&at_shelter));
        assert!(l3.contains(&at_shelter), "both agents on shelter cells");
    }

    #[test]
    fn wrong_action_count_is_an_error() {
        let map = tiny_map();
        let state = WorldState::initial(&map);
        assert!(state.step(&[Action::Up]).is_err());
    }

    #[test]
    fn features_layout_and_sentinel() {
        let map = tiny_map();
        let state = WorldState::initial(&map);
        let f = state.features(0);
        assert_eq!(f.len(), WorldState::feature_len(2));
        assert_eq!(f.len(), 10);
        assert_eq!(f[0], 1.0, "wood is adjacent to agent 0");
        assert_eq!(f[1], -1.0, "no grass on this map");
        assert_eq!(f[3], 2.0, "toolshed two cells away");
        assert_eq!(f[7], 1.0, "other agent dx");
        assert_eq!(f[8], 1.0, "other agent dy");
        assert_eq!(f[9], 0.0, "clock starts at 5:00");

        // Consume the wood: its distance feature becomes the sentinel.
        let (next, _) = state.step(&[Action::Right, Action::Up]).unwrap();
        assert_eq!(next.features(0)[0], -1.0);
    }

    #[test]
    fn feature_distances_stay_in_range() {
        let map = tiny_map();
        let mut state = WorldState::initial(&map);
        for round in 0..40 {
            let a = Action::from_index(round % 4);
            let b = Action::from_index((round / 4) % 4);
            let (next, _) = state.step(&[a, b]).unwrap();
            for i in 0..2 {
                for v in next.features(i).iter().take(7) {
                    assert!(*v >= -1.0 && *v <= (map.width + map.height) as Real);
                }
            }
            state = next;
        }
    }

    #[test]
    fn step_is_deterministic() {
        let map = tiny_map();
        let state = WorldState::initial(&map);
        let a = state.step(&[Action::Right, Action::Left]).unwrap();
        let b = state.step(&[Action::Right, Action::Left]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn registry_order_is_frozen() {
        let names: Vec<String> = registered_propositions()
            .iter()
            .map(|p| p.name().to_string())
            .collect();
        assert_eq!(
            names,
            vec![
                "got_wood",
                "got_grass",
                "got_iron",
                "used_toolshed",
                "used_workbench",
                "used_factory",
                "at_shelter",
                "is_night"
            ]
        );
    }
}
