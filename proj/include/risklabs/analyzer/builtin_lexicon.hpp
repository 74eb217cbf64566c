#pragma once

namespace risklabs::analyzer {

/// Copy of data/lexicon.txt compiled into the library; a unit test keeps the two identical.
inline constexpr const char* kBuiltinLexicon = R"lexicon(
# Word lists for the offline transcript and headline analyzer.
# One section per list; words are lowercase and matched against whole tokens.

[positive]
beat
beats
boost
exceed
exceeded
exceeds
expansion
gain
gains
growth
improved
improvement
momentum
optimistic
outperform
profit
profitable
profits
raise
raised
record
robust
soar
soared
solid
strong
stronger
surge
surged
upgrade
upgraded

[negative]
bankruptcy
cut
cuts
decline
declined
default
downgrade
downgraded
fraud
investigation
lawsuit
loss
losses
miss
missed
plunge
plunged
probe
slump
warning
weak
weaker
widen
widened
widens

[risk]
debt
exposure
guidance
headwinds
impairment
litigation
restructuring
risk
risks
uncertainty
volatility
)lexicon";

}  // namespace risklabs::analyzer
