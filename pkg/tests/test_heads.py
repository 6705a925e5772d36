import numpy as np
import pytest

from conftest import rel_err
from protlora.heads import (AttentionPooling, HeadConfig, MAHead, SMHead, attention_pool, build_head,
                            cm_mah_forward, mah_forward, smh_forward)
from protlora.numerics import ShapeError, Tensor, backward, finite_diff_grad, make_rng, no_grad

D_IN = 6


def _head(kind, token_level=False, out_dim=3, combine="elementwise", seed=0):
    cfg = HeadConfig(kind, d_l=4, n_heads=2, d_head=8, out_dim=out_dim, token_level=token_level,
                     contact_combine=combine)
    return build_head(cfg, D_IN, make_rng(seed)).eval()


def _inputs(b=2, length=5, seed=1):
    rng = np.random.default_rng(seed)
    x = Tensor(rng.normal(size=(b, length, D_IN)), requires_grad=True)
    mask = np.ones((b, length), bool)
    mask[1, 3:] = False
    sym = rng.random((b, length, length))
    contact = Tensor(1.0 / (1.0 + np.exp(-(sym + np.swapaxes(sym, 1, 2)))))
    return x, mask, contact


def test_pooling_weights_sum_to_one():
    pool = AttentionPooling(8, 4, 3, make_rng(0)).eval()
    x, mask, _ = _inputs()
    x = Tensor(np.random.default_rng(0).normal(size=(2, 5, 8)))
    s = pool.weights(x, mask).data
    assert np.max(np.abs(s.sum(axis=-1) - 1.0)) < 1e-12
    assert np.all(s[1][:, 3:] == 0.0)


def test_pooling_single_residue_and_identical_rows():
    pool = AttentionPooling(8, 4, 2, make_rng(0)).eval()
    row = np.random.default_rng(1).normal(size=(1, 1, 8))
    one = pool(Tensor(row), np.ones((1, 1), bool))
    assert np.allclose(pool.weights(Tensor(row), np.ones((1, 1), bool)).data, 1.0)
    many = attention_pool(Tensor(np.repeat(row, 6, axis=1)), pool, np.ones((1, 6), bool))
    assert np.allclose(one.data, many.data, atol=1e-14)


def test_pooling_rejects_all_pad_rows():
    pool = AttentionPooling(8, 4, 2, make_rng(0))
    with pytest.raises(ValueError):
        pool(Tensor(np.ones((1, 3, 8))), np.zeros((1, 3), bool))


def test_dropout_only_in_training_mode():
    pool = AttentionPooling(8, 4, 2, make_rng(0), rate=0.5)
    x = Tensor(np.random.default_rng(2).normal(size=(1, 6, 8)))
    mask = np.ones((1, 6), bool)
    pool.eval()
    a, b = pool(x, mask).data, pool(x, mask).data
    assert np.array_equal(a, b)
    pool.train()
    assert not np.array_equal(pool(x, mask).data, a)


@pytest.mark.parametrize("kind", ["SMH", "MAH", "CM-MAH"])
def test_output_shapes(kind):
    x, mask, contact = _inputs()
    seq = _head(kind)(x, mask, contact)
    tok = _head(kind, token_level=True)(x, mask, contact)
    assert seq.shape == (2, 3) and tok.shape == (2, 5, 3)


@pytest.mark.parametrize("kind", ["SMH", "MAH", "CM-MAH"])
def test_zero_prediction_layer_gives_zero_logits(kind):
    head = _head(kind)
    head.predict.weight.data[:] = 0.0
    x, mask, contact = _inputs()
    assert np.all(head(x, mask, contact).data == 0.0)


@pytest.mark.parametrize("kind", ["SMH", "MAH", "CM-MAH"])
@pytest.mark.parametrize("token_level", [False, True])
def test_gradient_check(kind, token_level):
    head = _head(kind, token_level=token_level)
    x, mask, contact = _inputs()
    contact = Tensor(contact.data, requires_grad=True)
    probe = np.random.default_rng(9).normal(size=(2, 5, 3) if token_level else (2, 3))
    valid = mask[..., None] if token_level else 1.0

    def loss():
        return (head(x, mask, contact) * probe * valid).sum()

    backward(loss())
    tensors = dict(head.named_parameters(), x=x)
    if kind == "CM-MAH":
        tensors["contact"] = contact
    for name, t in tensors.items():
        numeric = finite_diff_grad(lambda: loss().item(), t)
        analytic = t.grad if t.grad is not None else np.zeros_like(t.data)
        assert rel_err(analytic, numeric) < 1e-4, name


def test_cm_mah_with_unit_contacts_equals_mah():
    x, mask, _ = _inputs()
    mah, cm = _head("MAH"), _head("CM-MAH")
    cm.load_state_dict(mah.state_dict())
    with no_grad():
        a = mah(x, mask).data
        b = cm(x, mask, Tensor(np.ones((2, 5, 5)))).data
    assert np.max(np.abs(a - b)) <= 1e-12


def test_single_residue_attention_ignores_contacts():
    head = _head("CM-MAH")
    x = Tensor(np.random.default_rng(3).normal(size=(1, 1, D_IN)))
    mask = np.ones((1, 1), bool)
    assert np.all(head.attention(x, mask, Tensor([[[0.3]]])).data == 1.0)
    a = head(x, mask, Tensor([[[0.3]]])).data
    b = head(x, mask, Tensor([[[0.9]]])).data
    assert np.array_equal(a, b)


def test_matmul_contact_mode_runs_and_differs():
    x, mask, contact = _inputs()
    ew, mm = _head("CM-MAH"), _head("CM-MAH", combine="matmul")
    mm.load_state_dict(ew.state_dict())
    assert not np.allclose(ew(x, mask, contact).data, mm(x, mask, contact).data)


def test_padding_invariance_of_head_outputs():
    head = _head("CM-MAH", token_level=True)
    rng = np.random.default_rng(4)
    x = rng.normal(size=(1, 4, D_IN))
    c = rng.random((1, 4, 4))
    c = c + np.swapaxes(c, 1, 2)
    xp = np.concatenate([x, rng.normal(size=(1, 3, D_IN))], axis=1)
    cp = np.pad(c, ((0, 0), (0, 3), (0, 3)), constant_values=0.7)
    mp = np.arange(7)[None] < 4
    with no_grad():
        a = head(Tensor(x), np.ones((1, 4), bool), Tensor(c)).data
        b = head(Tensor(xp), mp, Tensor(cp)).data[:, :4]
    assert np.max(np.abs(a - b)) < 1e-10


def test_kind_checked_wrappers():
    x, mask, contact = _inputs()
    assert smh_forward(x, mask, _head("SMH")).shape == (2, 3)
    assert mah_forward(x, mask, _head("MAH")).shape == (2, 3)
    assert cm_mah_forward(x, mask, contact, _head("CM-MAH")).shape == (2, 3)
    with pytest.raises(ValueError):
        smh_forward(x, mask, _head("MAH"))
    with pytest.raises(ShapeError):
        cm_mah_forward(x, mask, Tensor(np.ones((2, 4, 4))), _head("CM-MAH"))
    with pytest.raises(ValueError):
        _head("CM-MAH")(x, mask)


def test_config_validation():
    with pytest.raises(ValueError):
        HeadConfig("XYZ")
    with pytest.raises(ValueError):
        HeadConfig("MAH", d_head=10, n_heads=4)
    with pytest.raises(ValueError):
        HeadConfig(contact_combine="sum")
    assert HeadConfig("cm-mah").uses_contacts and not HeadConfig("MAH").uses_contacts
    assert isinstance(build_head(HeadConfig("SMH"), 4, make_rng(0)), SMHead)
    assert isinstance(build_head(HeadConfig("MAH"), 4, make_rng(0)), MAHead)
