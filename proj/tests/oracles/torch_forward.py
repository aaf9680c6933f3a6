"""Writes a random generator bundle and reference logits computed by torch.

The C++ inference must reproduce these logits; the forward pass here is
torch's own ConvTranspose2d/BatchNorm2d, independent of the library code.

usage: python torch_forward.py OUT_DIR [--seed N] [--records N]
"""
import argparse
import pathlib
import struct

import torch
from torch import nn

KIND_TCONV, KIND_BN = 1, 2
ACT_NONE, ACT_RELU, ACT_TANH = 0, 1, 2


def build(seed: int) -> nn.Sequential:
    torch.manual_seed(seed)
    layers = [
        nn.ConvTranspose2d(10, 256, 4, 1, 0), nn.BatchNorm2d(256), nn.ReLU(),
        nn.ConvTranspose2d(256, 128, 4, 2, 1), nn.BatchNorm2d(128), nn.ReLU(),
        nn.ConvTranspose2d(128, 64, 4, 2, 1), nn.BatchNorm2d(64), nn.ReLU(),
        nn.ConvTranspose2d(64, 6, 4, 2, 1), nn.Tanh(),
    ]
    net = nn.Sequential(*layers)
    with torch.no_grad():
        for m in net:
            if isinstance(m, nn.ConvTranspose2d):
                m.weight.normal_(0.0, 0.05)
                m.bias.uniform_(-0.1, 0.1)
            elif isinstance(m, nn.BatchNorm2d):
                m.weight.uniform_(0.5, 1.5)
                m.bias.uniform_(-0.2, 0.2)
                m.running_mean.uniform_(-0.1, 0.1)
                m.running_var.uniform_(0.5, 2.0)
    return net.eval()


def f32(values) -> bytes:
    flat = [float(v) for v in values]
    return struct.pack("<%df" % len(flat), *flat)


def u32(v: int) -> bytes:
    return struct.pack("<I", v)


def serialize(net: nn.Sequential) -> bytes:
    mods = list(net)
    records = []
    i = 0
    n = 0
    while i < len(mods):
        m = mods[i]
        act = ACT_NONE
        nxt = mods[i + 1] if i + 1 < len(mods) else None
        if isinstance(m, nn.ConvTranspose2d):
            if isinstance(nxt, nn.Tanh):
                act, i = ACT_TANH, i + 1
            dims = [m.in_channels, m.out_channels, m.kernel_size[0], m.kernel_size[1], m.stride[0], m.padding[0]]
            params = [m.weight.detach().flatten().tolist(), m.bias.detach().flatten().tolist()]
            records.append(("tconv%d" % n, KIND_TCONV, act, dims, params))
        elif isinstance(m, nn.BatchNorm2d):
            if isinstance(nxt, nn.ReLU):
                act, i = ACT_RELU, i + 1
            dims = [m.num_features]
            params = [m.weight.detach().tolist(), m.bias.detach().tolist(),
                      m.running_mean.detach().tolist(), m.running_var.detach().tolist()]
            records.append(("bn%d" % n, KIND_BN, act, dims, params))
        else:
            raise ValueError("unexpected module %r" % m)
        n += 1
        i += 1
    out = bytearray(b"ZGANWT01")
    out += u32(len(records))
    for name, kind, act, dims, params in records:
        raw = name.encode("utf-8")
        out += u32(len(raw)) + raw + u32(kind) + u32(act) + u32(len(dims))
        for d in dims:
            out += u32(d)
        for p in params:
            out += f32(p)
    return bytes(out)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("out", type=pathlib.Path)
    ap.add_argument("--seed", type=int, default=20240611)
    ap.add_argument("--records", type=int, default=8)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    net = build(args.seed)
    (args.out / "oracle_weights.bin").write_bytes(serialize(net))

    gen = torch.Generator().manual_seed(args.seed + 1)
    z = torch.rand(args.records, 10, generator=gen) * 2 - 1
    with torch.no_grad():
        logits = net(z.view(args.records, 10, 1, 1))
    blob = bytearray()
    for r in range(args.records):
        blob += f32(z[r].tolist())
        blob += f32(logits[r].flatten().tolist())
    (args.out / "oracle_fixtures.bin").write_bytes(bytes(blob))


if __name__ == "__main__":
    main()
