"""Seeded stratified train/test splits and annotation-sample selection."""
import numpy as np

from ..corpus import PostType
from ..labels import CLASS_ORDER, Label, Trinary, as_label


class ClassTooSmall(ValueError):
    pass


class InsufficientCell(ValueError):
    def __init__(self, cell, available, wanted):
        super().__init__(f"cell {cell[0].value}/{cell[1].value}: {available} candidates, "
                         f"{wanted} requested")
        self.cell, self.available = cell, available


def stratified_split(labels, train_fraction: float, seed: int = 0):
    """Split indices per class so each class keeps ``train_fraction`` in train.

    Returns sorted ``(train_idx, test_idx)`` arrays. Each class contributes
    ``round(train_fraction * size)`` items to train.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must lie strictly between 0 and 1")
    labels = [as_label(l) for l in labels]
    rng = np.random.default_rng(seed)
    train, test = [], []
    for cls in CLASS_ORDER:
        idx = np.array([i for i, l in enumerate(labels) if l is cls], dtype=np.int64)
        if idx.size == 0:
            continue
        if idx.size < 2:
            raise ClassTooSmall(f"class {cls.value} has {idx.size} item(s); need >= 2")
        idx = idx[rng.permutation(idx.size)]
        k = int(np.floor(train_fraction * idx.size + 0.5))
        k = min(max(k, 1), idx.size - 1)
        train.extend(idx[:k])
        test.extend(idx[k:])
    return np.sort(np.array(train, dtype=np.int64)), np.sort(np.array(test, dtype=np.int64))


ANNOTATION_CLASSES = (Trinary.POSITIVE, Trinary.NEGATIVE, Trinary.NEUTRAL)


def sample_for_annotation(posts, labels, n_per_cell: int, seed: int = 0):
    """Draw ``n_per_cell`` posts from each (post type, baseline label) cell.

    ``labels`` are the baseline's trinary labels for ``posts``; undetermined
    posts never qualify. Returns ``[(post, label), ...]`` ordered by cell,
    then by position in the input.
    """
    if n_per_cell < 0:
        raise ValueError("n_per_cell must be non-negative")
    labels = [Trinary(str(l)) for l in labels]
    if len(labels) != len(posts):
        raise ValueError("posts and labels differ in length")
    rng = np.random.default_rng(seed)
    cells = {(pt, lab): [] for pt in PostType for lab in ANNOTATION_CLASSES}
    for i, (post, lab) in enumerate(zip(posts, labels)):
        if lab is Trinary.UNDETERMINED:
            continue
        cells[(post.post_type, lab)].append(i)
    for cell, members in cells.items():
        if len(members) < n_per_cell:
            raise InsufficientCell(cell, len(members), n_per_cell)
    sample = []
    for cell, members in cells.items():
        chosen = np.sort(rng.choice(np.array(members, dtype=np.int64), size=n_per_cell,
                                    replace=False)) if n_per_cell else []
        sample.extend((posts[i], Label(cell[1].value)) for i in chosen)
    return sample
