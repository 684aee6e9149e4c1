// Three-valued logic shared by all analysis verdicts: a check either
// certifies (True), refutes (False), or cannot decide (Unknown).
#pragma once

#include <string>

namespace probterm {

enum class Trilean { True, False, Unknown };

inline Trilean tri_and(Trilean a, Trilean b) {
    if (a == Trilean::False || b == Trilean::False) return Trilean::False;
    if (a == Trilean::True && b == Trilean::True) return Trilean::True;
    return Trilean::Unknown;
}

inline Trilean tri_or(Trilean a, Trilean b) {
    if (a == Trilean::True || b == Trilean::True) return Trilean::True;
    if (a == Trilean::False && b == Trilean::False) return Trilean::False;
    return Trilean::Unknown;
}

inline Trilean tri_not(Trilean a) {
    if (a == Trilean::True) return Trilean::False;
    if (a == Trilean::False) return Trilean::True;
    return Trilean::Unknown;
}

inline const char* to_string(Trilean t) {
    switch (t) {
        case Trilean::True: return "Yes";
        case Trilean::False: return "No";
        default: return "Maybe";
    }
}

} // namespace probterm
