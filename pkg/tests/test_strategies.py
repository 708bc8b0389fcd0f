import threading

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sklearn.base import clone

from sfcqmc.curves import CapacityError, GridSpec, ImageDims, curve_index, fit_grid, rank_table
from sfcqmc.radical import ScrambleSpec, inverse_radical, radical_inverse
from sfcqmc.sequences import HaltonSpec, LatticeSpec, cranley_patterson, halton_point, lattice_point
from sfcqmc.strategies import (
    PRESETS,
    DoublingSegments,
    HilbertBlocks,
    ImagePlaneCRT,
    Partitioned,
    RandomizedPasses,
    SampleRequest,
    ShiftedLattice,
    assign_doubling,
    assign_hilbert_blocks,
    assign_image_plane_crt,
    assign_partitioned,
    assign_shifted_lattice,
    crt_pair,
    extended_euclid,
    make_strategy,
    pass_seed,
    randomize_pass,
)


def all_requests(dims, samples):
    ys, xs, ss = np.meshgrid(np.arange(dims.height), np.arange(dims.width), np.arange(samples), indexing="ij")
    return np.stack([xs.ravel(), ys.ravel(), ss.ravel()], axis=1)


def pixel_of_rank(strategy, rank):
    y, x = np.argwhere(strategy.ranks_ == rank)[0]
    return int(x), int(y)


# ---------------------------------------------------------------- estimator API


@pytest.mark.parametrize("cls", [HilbertBlocks, Partitioned, ShiftedLattice, ImagePlaneCRT, DoublingSegments])
def test_estimator_params_and_clone(cls):
    est = cls(n_dims=3)
    params = est.get_params()
    assert params["n_dims"] == 3
    twin = clone(est)
    assert twin.get_params() == params and twin is not est
    assert "dims_" not in vars(twin)


def test_fit_accepts_image_arrays():
    a = HilbertBlocks().fit(np.zeros((7, 5)))
    b = HilbertBlocks().fit(np.zeros((7, 5, 3)))
    c = HilbertBlocks().fit(ImageDims(5, 7))
    assert a.dims_ == b.dims_ == c.dims_ == ImageDims(5, 7)
    with pytest.raises(ValueError):
        HilbertBlocks().fit(np.zeros(5))


def test_unfitted_raises():
    from sklearn.exceptions import NotFittedError

    with pytest.raises(NotFittedError):
        HilbertBlocks().transform([[0, 0, 0]])


def test_request_validation():
    est = HilbertBlocks(spp=2).fit(ImageDims(4, 4))
    with pytest.raises(ValueError):
        est.transform([[4, 0, 0]])
    with pytest.raises(ValueError):
        est.transform([[0, 0, -1]])
    with pytest.raises(ValueError):
        est.transform([[0, 0]])


def test_nested_params():
    est = RandomizedPasses(HilbertBlocks(curve="moore"), seed=4)
    params = est.get_params()
    assert params["inner__curve"] == "moore"
    est.set_params(inner__curve="morton")
    assert est.inner.curve == "morton"


# ---------------------------------------------------------------- HilbertBlocks


def test_hilbert_blocks_examples():
    est = HilbertBlocks(spp=1).fit(ImageDims(8, 8))
    index, point = assign_hilbert_blocks(est, SampleRequest(0, 0, 0))
    assert index == 0 and np.array_equal(point, np.zeros(4))
    est = HilbertBlocks(spp=4).fit(ImageDims(8, 8))
    x, y = pixel_of_rank(est, 2)
    assert assign_hilbert_blocks(est, SampleRequest(x, y, 3))[0] == 11


@pytest.mark.parametrize("dims", [ImageDims(8, 8), ImageDims(5, 7), ImageDims(1, 9)])
@pytest.mark.parametrize("spp", [1, 3, 4])
def test_hilbert_blocks_coverage(dims, spp):
    est = HilbertBlocks(spp=spp).fit(dims)
    idx = est.sample_index(all_requests(dims, spp))
    assert np.array_equal(np.sort(idx), np.arange(spp * dims.width * dims.height))


def test_hilbert_blocks_points_are_halton_points():
    est = HilbertBlocks(spp=2, n_dims=3, scramble="owen:5").fit(ImageDims(6, 6))
    req = all_requests(ImageDims(6, 6), 2)
    spec = HaltonSpec(3, ScrambleSpec("owen", 5))
    assert np.array_equal(est.transform(req), halton_point(spec, est.sample_index(req)))


def test_hilbert_blocks_rejects_s_beyond_budget():
    est = HilbertBlocks(spp=2).fit(ImageDims(4, 4))
    with pytest.raises(ValueError):
        est.transform([[0, 0, 2]])


def test_hilbert_blocks_consecutive_pixels_are_adjacent():
    est = HilbertBlocks(spp=1).fit(ImageDims(16, 16))
    order = [pixel_of_rank(est, r) for r in range(256)]
    steps = [abs(a[0] - b[0]) + abs(a[1] - b[1]) for a, b in zip(order, order[1:])]
    assert set(steps) == {1}


# ---------------------------------------------------------------- Partitioned


def test_partitioned_examples():
    est = Partitioned().fit(ImageDims(4, 4))
    xs, ys = np.nonzero(curve_index(est.grid_, *np.meshgrid(range(4), range(4), indexing="ij")) == 5)
    x, y = int(xs[0]), int(ys[0])
    assert assign_partitioned(est, SampleRequest(x, y, 3))[0] == 53
    assert assign_partitioned(est, SampleRequest(0, 0, 0))[0] == 0


@pytest.mark.parametrize("inverse", [False, True])
@pytest.mark.parametrize("curve,dims", [("hilbert", ImageDims(8, 8)), ("peano", ImageDims(9, 9)), ("morton", ImageDims(4, 4))])
def test_partitioned_windows(inverse, curve, dims):
    est = Partitioned(curve=curve, use_inverse_offset=inverse).fit(dims)
    n = est.grid_.length
    for s in range(3):
        req = all_requests(dims, 1)
        req[:, 2] = s
        idx = est.sample_index(req)
        assert np.array_equal(np.sort(idx), np.arange(s * n, (s + 1) * n))


def test_partitioned_non_square_image_uses_raw_index():
    dims = ImageDims(5, 3)
    est = Partitioned().fit(dims)
    idx = est.sample_index(all_requests(dims, 1))
    assert len(set(idx.tolist())) == 15
    assert idx.max() < est.grid_.length


def test_partitioned_inverse_offset_selects_partition_by_radical_inverse():
    dims = ImageDims(8, 8)
    est = Partitioned(use_inverse_offset=True).fit(dims)
    n = est.grid_.length
    req = all_requests(dims, 5)
    idx = est.sample_index(req)
    j = curve_index(est.grid_, req[:, 0], req[:, 1])
    assert np.array_equal(np.floor(radical_inverse(2, idx) * n).astype(int), j)
    plain = Partitioned().fit(dims).sample_index(req)
    assert not np.array_equal(plain, idx)
    assert np.array_equal(np.sort(plain), np.sort(idx))


def test_partitioned_drops_partition_dimension():
    dims = ImageDims(4, 4)
    est = Partitioned(n_dims=3).fit(dims)
    req = all_requests(dims, 2)
    full = halton_point(HaltonSpec(4, ScrambleSpec("faure")), est.sample_index(req))
    assert np.array_equal(est.transform(req), full[:, 1:])
    peano = Partitioned(curve="peano", n_dims=3).fit(ImageDims(3, 3))
    req = all_requests(ImageDims(3, 3), 1)
    full = halton_point(HaltonSpec(4, ScrambleSpec("faure")), peano.sample_index(req))
    assert np.array_equal(peano.transform(req), full[:, [0, 2, 3]])


def test_partitioned_capacity():
    est = Partitioned().fit(ImageDims(4, 4))
    with pytest.raises(CapacityError):
        est.sample_index([[0, 0, 2**62]])


# ---------------------------------------------------------------- ShiftedLattice


def test_shifted_lattice_examples():
    dims = ImageDims(8, 8)
    est = ShiftedLattice().fit(dims)
    lat = LatticeSpec(4)
    x0, y0 = pixel_of_rank(est, 0)
    for s in (0, 1, 7):
        assert np.array_equal(assign_shifted_lattice(est, SampleRequest(x0, y0, s)), lattice_point(lat, s))
    x, y = pixel_of_rank(est, 9)
    shift = halton_point(HaltonSpec(4, ScrambleSpec("faure")), 9)
    assert np.allclose(assign_shifted_lattice(est, SampleRequest(x, y, 0)), shift)


def test_shifted_lattice_translation_structure():
    est = ShiftedLattice(n_dims=2).fit(ImageDims(4, 4))
    a = est.transform([[1, 2, 5]])[0]
    b = est.transform([[3, 0, 5]])[0]
    d = (a - b) % 1.0
    expect = (est.shifts_[2, 1] - est.shifts_[0, 3]) % 1.0
    assert np.allclose(np.minimum(abs(d - expect), 1 - abs(d - expect)), 0, atol=1e-12)


def test_shifted_lattice_custom_vector_and_mismatch():
    est = ShiftedLattice(n_dims=2, generating_vector=(1, 3)).fit(ImageDims(2, 2))
    assert est.lattice_.generating_vector == (1, 3)
    with pytest.raises(ValueError):
        ShiftedLattice(n_dims=3, generating_vector=(1, 3)).fit(ImageDims(2, 2))


# ---------------------------------------------------------------- ImagePlaneCRT


def test_extended_euclid_and_crt():
    g, u, v = extended_euclid(240, 46)
    assert g == 2 and 240 * u + 46 * v == 2
    assert crt_pair(2, 4, 0, 3) == 6
    with pytest.raises(ValueError):
        crt_pair(0, 4, 0, 6)


def test_crt_example_grid_4x3():
    est = ImagePlaneCRT(scramble="none").fit(ImageDims(4, 3))
    assert est.cells_ == (4, 3)
    assert assign_image_plane_crt(est, SampleRequest(1, 0, 0))[0] == 6
    assert assign_image_plane_crt(est, SampleRequest(0, 0, 0))[0] == 0


@pytest.mark.parametrize("scramble", ["none", "faure", "owen:3", "digit:8"])
def test_crt_matches_brute_force_binning(scramble):
    dims = ImageDims(8, 9)
    est = ImagePlaneCRT(scramble=scramble).fit(dims)
    spec = HaltonSpec(2, ScrambleSpec.parse(scramble))
    n = 8 * 9
    pts = halton_point(spec, np.arange(4 * n))
    cx = np.floor(pts[:, 0] * 8).astype(int)
    cy = np.floor(pts[:, 1] * 9).astype(int)
    seen = {}
    for i, key in enumerate(zip(cx.tolist(), cy.tolist())):
        seen.setdefault(key, []).append(i)
    for (x, y), indices in seen.items():
        assert len(indices) == 4
        got = est.sample_index([[x, y, s] for s in range(4)])
        assert got.tolist() == indices


def test_crt_partition_and_consistency():
    est = ImagePlaneCRT(scramble="none").fit(ImageDims(8, 9))
    idx = est.sample_index(all_requests(ImageDims(8, 9), 1))
    assert np.array_equal(np.sort(idx), np.arange(72))
    i = np.arange(72)
    cx = np.floor(radical_inverse(2, i) * 8).astype(int)
    cy = np.floor(radical_inverse(3, i) * 9).astype(int)
    assert np.array_equal(est.offsets_[cy, cx], i)


def test_crt_offsets_within_pixel():
    dims = ImageDims(5, 7)
    est = ImagePlaneCRT(scramble="none").fit(dims)
    req = all_requests(dims, 3)
    pts = est.transform(req)
    assert np.all((pts >= 0) & (pts < 1))
    full = halton_point(HaltonSpec(4), est.sample_index(req))
    assert np.allclose(pts[:, 0] + req[:, 0], full[:, 0] * 8)
    assert np.allclose(pts[:, 1] + req[:, 1], full[:, 1] * 9)
    assert np.array_equal(pts[:, 2:], full[:, 2:])


def test_crt_grid_limits():
    with pytest.raises(CapacityError):
        ImagePlaneCRT().fit(ImageDims(2**31 + 1, 1))
    with pytest.raises(ValueError):
        ImagePlaneCRT(n_dims=1).fit(ImageDims(2, 2))


def test_crt_large_grid_stays_exact():
    est = ImagePlaneCRT(scramble="none").fit(ImageDims(1920, 1080))
    for x, y in [(0, 0), (1919, 1079), (1234, 567)]:
        i = int(est.sample_index([[x, y, 0]])[0])
        assert i < 2048 * 2187
        assert i % 2048 == inverse_radical(2, 11, x)
        assert i % 2187 == inverse_radical(3, 7, y)


# ---------------------------------------------------------------- DoublingSegments


def test_doubling_examples():
    dims = ImageDims(4, 4)
    est = DoublingSegments().fit(dims)
    blocks = HilbertBlocks(spp=1).fit(dims)
    req = all_requests(dims, 1)
    assert np.array_equal(est.sample_index(req), blocks.sample_index(req))
    x, y = pixel_of_rank(est, 0)
    assert est.sample_index([[x, y, 1], [x, y, 2]]).tolist() == [16, 17]
    assert assign_doubling(est, SampleRequest(x, y, 3))[0] == 3 * 16


@pytest.mark.parametrize("dims", [ImageDims(4, 4), ImageDims(3, 5)])
def test_doubling_never_reuses_and_passes_are_contiguous(dims):
    est = DoublingSegments().fit(dims)
    wh = dims.width * dims.height
    idx = est.sample_index(all_requests(dims, 31))
    assert np.array_equal(np.sort(idx), np.arange(31 * wh))
    for t in range(5):
        req = all_requests(dims, 2 ** (t + 1) - 1)
        req = req[req[:, 2] >= 2**t - 1]
        got = np.sort(est.sample_index(req))
        assert np.array_equal(got, np.arange((2**t - 1) * wh, (2 ** (t + 1) - 1) * wh))


# ---------------------------------------------------------------- RandomizedPasses


def test_pass_zero_seed_zero_is_deterministic_strategy():
    inner = HilbertBlocks(spp=1)
    same = randomize_pass(inner, 0, 0)
    assert same.get_params() == inner.get_params()
    dims = ImageDims(4, 4)
    wrapped = RandomizedPasses(inner).fit(dims)
    req = all_requests(dims, 1)
    assert np.array_equal(wrapped.transform(req), inner.fit(dims).transform(req))


def test_pass_seeds_distinct():
    seeds = {pass_seed(7, p) for p in range(1000)}
    assert len(seeds) == 1000
    assert pass_seed(0, 0) == 0 and pass_seed(0, 1) != 0


def test_randomize_pass_replaces_scramble():
    est = randomize_pass(Partitioned(), 3, 11, mode="digit")
    assert est.scramble == ScrambleSpec("digit", pass_seed(11, 3))
    with pytest.raises(ValueError):
        randomize_pass(Partitioned(), 1, 1, mode="faure")


def test_randomized_passes_split_samples():
    dims = ImageDims(4, 4)
    est = RandomizedPasses(HilbertBlocks(), samples_per_pass=2, seed=5).fit(dims)
    req = all_requests(dims, 6)
    pts = est.transform(req)
    for p in range(3):
        inner = randomize_pass(HilbertBlocks(spp=2), p, 5).fit(dims)
        sel = req[:, 2] // 2 == p
        sub = req[sel].copy()
        sub[:, 2] %= 2
        assert np.array_equal(pts[sel], inner.transform(sub))


def test_randomized_passes_thread_safe_cache():
    est = RandomizedPasses(ShiftedLattice(), seed=2).fit(ImageDims(4, 4))
    req = all_requests(ImageDims(4, 4), 8)
    expected = est.transform(req)
    results = []

    def worker():
        results.append(clone(est).fit(ImageDims(4, 4)).transform(req))

    threads = [threading.Thread(target=worker) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(np.array_equal(r, expected) for r in results)


# ---------------------------------------------------------------- purity and presets


@settings(max_examples=30, deadline=None)
@given(name=st.sampled_from(sorted(PRESETS)), x=st.integers(0, 6), y=st.integers(0, 4), s=st.integers(0, 40))
def test_assignment_is_pure(name, x, y, s):
    dims = ImageDims(7, 5)
    spp = s + 1
    a = make_strategy(name, spp=spp).fit(dims)
    b = make_strategy(name, spp=spp).fit(dims)
    ia, pa = a.assign(x, y, s)
    ib, pb = b.assign((x, y, s))
    assert ia == ib and np.array_equal(pa, pb)
    assert np.all((pa >= 0) & (pa < 1))


def test_make_strategy():
    assert isinstance(make_strategy("baseline-crt"), ImagePlaneCRT)
    assert make_strategy("partitioned-inverse").use_inverse_offset
    est = make_strategy("randomized:shifted-lattice", seed=3, curve="moore")
    assert isinstance(est, RandomizedPasses) and est.seed == 3 and est.inner.curve == "moore"
    with pytest.raises(ValueError):
        make_strategy("nope")


def test_integrand_dimension_bookkeeping():
    dims = ImageDims(4, 4)
    for name in PRESETS:
        est = make_strategy(name, n_dims=3).fit(dims)
        assert est.n_integrand_dims_ == 3
        assert est.transform([[1, 1, 0]]).shape == (1, 3)
