"""
Word similarity from an association network
===========================================

A toy cue/response table stands in for a free-association dataset. It
is converted to a weighted edge list, embedded, and scored against a
small hand-made similarity list with Spearman's rho.
"""

import os
import tempfile

from core2vec import TrainConfig, WalkParams, learn_features, load_edge_list
from core2vec.dataio import SimilarityRecord, convert_assoc, evaluate_wordsim

ASSOC = """cue,response,strength
dog,cat,0.40
dog,bone,0.20
dog,bark,0.15
cat,dog,0.35
cat,mouse,0.30
cat,purr,0.10
mouse,cheese,0.45
mouse,cat,0.30
cheese,mouse,0.25
cheese,milk,0.20
milk,cow,0.40
milk,cheese,0.20
cow,milk,0.50
cow,farm,0.20
farm,cow,0.30
farm,tractor,0.25
bone,dog,0.50
bark,tree,0.30
bark,dog,0.40
tree,leaf,0.45
tree,bark,0.20
leaf,tree,0.60
purr,cat,0.70
tractor,farm,0.60
"""

tmp = tempfile.mkdtemp()
raw = os.path.join(tmp, "assoc.csv")
with open(raw, "w", encoding="utf-8") as fh:
    fh.write(ASSOC)

edges = os.path.join(tmp, "assoc.txt")
print("edges written:", convert_assoc(raw, edges))
g = load_edge_list(edges, weighted=True)
print(g.summary())

# word-network settings: penalty 3.5, lam 0.3, gamma 3
emb, _ = learn_features(g, WalkParams(lam=0.3, gamma=3.0, penalty=3.5, seed=5),
                        TrainConfig(dimensions=16, epochs=20, seed=5))

gold = [
    SimilarityRecord("dog", "cat", 8.0),
    SimilarityRecord("cow", "milk", 7.5),
    SimilarityRecord("tree", "leaf", 7.0),
    SimilarityRecord("mouse", "cheese", 6.5),
    SimilarityRecord("farm", "tractor", 6.0),
    SimilarityRecord("dog", "tree", 2.0),
    SimilarityRecord("purr", "tractor", 0.5),
    SimilarityRecord("leaf", "cheese", 0.5),
    SimilarityRecord("dog", "unicorn", 3.0),  # out of vocabulary, skipped
]
res = evaluate_wordsim(emb, g.labels, gold)
print(f"rho={res.rho:.3f} p={res.p_value:.3g} used={res.n_used} skipped={res.n_skipped}")
