"""Smoke test for the vibrato_lab extension module.

Build and install first, e.g. `pip install ./crates/python`, then run
`python python/smoke_test.py`.
"""

import math
import os
import tempfile

import vibrato_lab as vl


def main() -> None:
    assert vl.physical_center(220.0, 330.0) == 1.0 / 3.0
    d = vl.acoustic_depth(0.00497, 0.5, 220.0)
    assert abs(vl.physical_depth(d, 440.0, 220.0) - 0.00497) < 1e-12

    spec = vl.SynthSpec()
    buf = spec.render()
    assert len(buf) == 88200 and buf.sample_rate == 44100

    m = vl.analyze_buffer(buf, string_freq=220.0, center_hint=440.0)
    assert abs(m.center_frac - 0.5) < 0.005, m
    assert abs(m.d_cents - 20.0) < 1.0, m
    assert abs(m.rate_hz - 6.0) < 0.05, m

    truth = spec.true_measurement(220.0)
    assert truth.center_frac == 0.5

    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "tone.wav")
        buf.write_wav(path)
        again = vl.analyze_file(path, 220.0, 440.0, player="p", corpus="synth")
        assert again.player == "p" and abs(again.d_cents - m.d_cents) < 0.5

        flat = vl.SynthSpec(depth_cents=0.0).render()
        try:
            vl.analyze_buffer(flat, 220.0, 440.0)
        except vl.AnalysisRejected as exc:
            assert exc.args[0] == "no-vibrato"
        else:
            raise AssertionError("flat tone was not rejected")

        try:
            vl.AudioBuffer.read_wav(os.path.join(tmp, "missing.wav"))
        except OSError:
            pass
        else:
            raise AssertionError("missing file did not raise")

    track = vl.yin_track(vl.SynthSpec(depth_cents=0.0, n_harmonics=1).render(), 392.0, 494.0)
    assert all(abs(f - 440.0) < 0.5 for f in track.f0)

    xs = [i / 20 for i in range(21)]
    fit = vl.polyfit(xs, [63.8 * (x - 0.054) ** 2 + 3.31 for x in xs], 2)
    a, h, k = fit.vertex_form
    assert abs(a - 63.8) < 1e-6 and abs(h - 0.054) < 1e-6 and abs(k - 3.31) < 1e-6

    rho, p = vl.spearman(xs, [math.exp(x) for x in xs])
    assert rho == 1.0 and 0.0 < p < 1e-15

    _, _, _, crossings = vl.model_curves(0.00497, (-0.0079, 0.054, 0.0066))
    assert len(crossings) == 1 and abs(crossings[0] - 0.508) < 0.005

    print("smoke test ok:", m)


if __name__ == "__main__":
    main()
