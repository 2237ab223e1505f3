"""The continuous learning loop on a raw agent.

Train pairs one at a time, watch predictions appear instantly, inspect
the memory registry, then delete a single pair and watch its influence
vanish exactly — the whole point of keeping learning in lookup tables.
"""

import numpy as np

from wnnrec import Agent, AgentConfig, load_agent, save_agent

rng = np.random.default_rng(42)
agent = Agent(AgentConfig(seed=42))

print("== learn three movies ==")
movies = {name: rng.integers(0, 2, size=26) for name in ("heat", "amelie", "alien")}
ratings = {"heat": 4.5, "amelie": 3.0, "alien": 1.0}
for name, code in movies.items():
    agent.reset_state()
    pair_id = agent.train(code, ratings[name])
    print(f"  trained {name!r} at {ratings[name]} (pair id {pair_id})")

print("\n== instant recall, no training cycles ==")
for name, code in movies.items():
    print(f"  {name!r}: predicted {agent.predict_stateless(code)[0]}")

unseen = rng.integers(0, 2, size=26)
print(f"  unseen movie: predicted {agent.predict_stateless(unseen)[0]} (nearest-pattern generalization)")

print("\n== the memory registry is inspectable ==")
for pair in agent.list_memory():
    print(f"  pair {pair.id}: target {pair.target}, trained at tick {pair.timestamp}")

print("\n== selective forgetting ==")
before = agent.predict_stateless(movies["alien"])[0]
tables_before = agent.tables_snapshot()
agent.reset_state()
extra = agent.train(movies["alien"], 5.0)   # second opinion on 'alien'
print(f"  after re-rating alien at 5.0: predicted {agent.predict_stateless(movies['alien'])[0]}")
agent.delete_pair(extra)
print(f"  after deleting that pair:     predicted {agent.predict_stateless(movies['alien'])[0]} (was {before})")
print(f"  tables byte-identical to before the extra rating: {agent.tables_snapshot() == tables_before}")

print("\n== snapshots rebuild the same machine ==")
clone = load_agent(save_agent(agent))
probe = rng.integers(0, 2, size=26)
print(f"  original {agent.predict_stateless(probe)[0]} vs clone {clone.predict_stateless(probe)[0]}")
