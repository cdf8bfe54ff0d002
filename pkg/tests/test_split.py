import pytest

from trajtext.augment import augment
from trajtext.errors import EmptyCategory, EmptyInput, UnlabeledExample
from trajtext.model import PerformanceCategory, Split, TextExample
from trajtext.split import SplitPoint, SplitSpec, stratified_split
from trajtext.split import test_count as expected_test_count
from trajtext.verbalize import verbalize_output

from test_augment import example, paper_shaped_examples

AT = PerformanceCategory.AT_RISK
PR = PerformanceCategory.PRONE_TO_RISK
AV = PerformanceCategory.AVERAGE
OU = PerformanceCategory.OUTSTANDING


@pytest.fixture(scope="module")
def balanced_144():
    return augment(paper_shaped_examples(), master_seed=7)


def test_rounding_rule():
    assert expected_test_count(48, 0.30) == 14
    assert expected_test_count(36, 0.30) == 11
    assert expected_test_count(30, 0.30) == 9
    assert expected_test_count(2, 0.5) == 1
    assert expected_test_count(1, 0.1) == 1
    assert expected_test_count(0, 0.3) == 0


def test_paper_shaped_counts(balanced_144):
    train, test = stratified_split(balanced_144, SplitSpec(test_fraction=0.30, seed=3))
    counts = {c: sum(1 for e in test if e.label is c) for c in (OU, AV, PR, AT)}
    assert counts == {OU: 14, AV: 11, PR: 9, AT: 9}
    assert len(test) == 43
    assert len(train) == 101


def test_union_and_disjointness(balanced_144):
    train, test = stratified_split(balanced_144, SplitSpec(seed=3))
    train_ids = {e.example_id for e in train}
    test_ids = {e.example_id for e in test}
    assert not train_ids & test_ids
    assert train_ids | test_ids == {e.example_id for e in balanced_144}


def test_split_stamped(balanced_144):
    train, test = stratified_split(balanced_144, SplitSpec(seed=3))
    assert all(e.split is Split.TRAIN for e in train)
    assert all(e.split is Split.TEST for e in test)


def test_exact_halving_two_per_class():
    examples = [example(i, c) for i, c in enumerate((OU, OU, AV, AV, PR, PR, AT, AT))]
    train, test = stratified_split(examples, SplitSpec(test_fraction=0.5, seed=1))
    for c in (OU, AV, PR, AT):
        assert sum(1 for e in test if e.label is c) == 1
        assert sum(1 for e in train if e.label is c) == 1


def test_same_seed_identical_different_seed_differs(balanced_144):
    a1 = stratified_split(balanced_144, SplitSpec(seed=5))
    a2 = stratified_split(balanced_144, SplitSpec(seed=5))
    b = stratified_split(balanced_144, SplitSpec(seed=6))
    assert a1 == a2
    assert {e.example_id for e in a1[1]} != {e.example_id for e in b[1]}


def test_before_augmentation_is_leakage_free(balanced_144):
    spec = SplitSpec(seed=4, split_point=SplitPoint.BEFORE_AUGMENTATION)
    train, test = stratified_split(balanced_144, spec)
    train_parents = {e.parent_id or e.example_id for e in train}
    test_parents = {e.parent_id or e.example_id for e in test}
    assert not train_parents & test_parents
    assert len(train) + len(test) == len(balanced_144)


def test_empty_input():
    with pytest.raises(EmptyInput):
        stratified_split([], SplitSpec())


def test_empty_category():
    examples = [example(i, OU) for i in range(4)]
    with pytest.raises(EmptyCategory):
        stratified_split(examples, SplitSpec())


def test_unlabeled_example():
    bad = TextExample(
        example_id="x",
        student_id="s",
        input_text="t",
        output_text=verbalize_output(OU),
        label=None,
    )
    with pytest.raises(UnlabeledExample):
        stratified_split([bad], SplitSpec(stratify=False))


def test_unstratified_split_counts(balanced_144):
    train, test = stratified_split(balanced_144, SplitSpec(seed=2, stratify=False))
    assert len(test) == expected_test_count(144, 0.30) == 43
    assert len(train) == 101


def test_fraction_bounds():
    with pytest.raises(ValueError):
        SplitSpec(test_fraction=0.0)
    with pytest.raises(ValueError):
        SplitSpec(test_fraction=1.0)
