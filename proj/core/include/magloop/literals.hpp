#pragma once

#include <string_view>

#include "magloop/field_profile.hpp"
#include "magloop/landau.hpp"

namespace magloop {

// Numeric amplitude expression: optional sign, then factors joined by '*' or
// '/'. A factor is a decimal number, 'pi', a number directly prefixing pi
// ("2pi"), or the bound parameter 't' where one is supplied. Whitespace is
// ignored. Throws std::invalid_argument on malformed input.
double parse_expression(std::string_view text);
double parse_expression(std::string_view text, double t_value);

// Profile literals:
//   constant:BETA
//   harmonic:BETA0,BETA1
//   biharmonic:BETA1,BETA2
//   piecewise:BETA*DT;BETA*DT;...   (one '*' per segment, none inside terms)
//   landau:BETA,BETA,...            (pi-pulse amplitudes, durations implied)
FieldProfile parse_profile(std::string_view literal);

// Pulse-sequence literal "landau:pi/6,pi/4,pi,pi/3".
PulseSequence parse_pulse_sequence(std::string_view literal);

// Word literal "word:free(t)*kick(3/t)*parity", with t bound to t_value.
// Primitives are listed in operator order, the rightmost acting first.
KickFreeWord parse_word(std::string_view literal, double t_value);

}  // namespace magloop
