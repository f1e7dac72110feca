"""Walk the mean photon number through the interferometric link.

The source splits into a bright long-arm pulse and a heavily attenuated
short-arm signal. Both ride the same fiber to the receiving station,
where a second splitter and attenuator carve out the dim local
oscillator. Two detector nuisances ride along: afterpulses correlated
with the bright detections, and switch crosstalk leaking bright light
into the signal detector.
"""

from brpqkd import (
    ChannelParams,
    OpticalChain,
    afterpulse_error,
    crosstalk_false_click,
    propagate,
)

chain = OpticalChain(source_intensity=8e5, channel=ChannelParams(length_km=146.0))
report = propagate(chain)

print(f"source intensity:        {chain.source_intensity:.3e}")
print(f"fiber:                   {chain.channel.length_km:.0f} km at "
      f"{chain.channel.loss_db_per_km} dB/km")
print()
print("at the sending station")
print(f"  bright reference pulse: {report.brp_at_alice:.4e}")
print(f"  signal pulse:           {report.signal_at_alice:.4e}")
print()
print("after the fiber")
print(f"  bright reference pulse: {report.brp_at_bob:.4e}")
print(f"  signal pulse:           {report.signal_at_bob:.4e}")
print(f"  dim local oscillator:   {report.dim_at_bob:.4e}")
print()
print("detector nuisances")
leak = report.switch_leak_at_signal_detector
print(f"  switch leak at signal detector: {leak:.4e}")
print(f"  false click probability (eta_d = 0.045): {crosstalk_false_click(leak, 0.045):.4e}")
print(f"  afterpulse error contribution at p = 0.008: {afterpulse_error(0.008):.4f}")
