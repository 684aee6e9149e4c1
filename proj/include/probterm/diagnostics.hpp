// Error taxonomy. Frontend errors carry source positions; analysis errors
// signal degraded answers (the driver maps them to Maybe verdicts), never
// crashes.
#pragma once

#include <stdexcept>
#include <string>

namespace probterm {

struct SourcePos {
    int line = 0; // 1-based; 0 = unknown
    int col = 0;

    std::string str() const {
        if (line == 0) return "";
        return std::to_string(line) + ":" + std::to_string(col);
    }
};

class SyntaxError : public std::runtime_error {
  public:
    SyntaxError(SourcePos pos, const std::string& message)
        : std::runtime_error(pos.str().empty() ? message : pos.str() + ": " + message),
          pos_(pos) {}
    SourcePos pos() const { return pos_; }

  private:
    SourcePos pos_;
};

class UnknownDistribution : public SyntaxError {
  public:
    UnknownDistribution(SourcePos pos, const std::string& name)
        : SyntaxError(pos, "unknown distribution '" + name + "'"), name_(name) {}
    const std::string& name() const { return name_; }

  private:
    std::string name_;
};

class StructureError : public std::runtime_error {
  public:
    StructureError(std::string variable, const std::string& message, SourcePos pos = {})
        : std::runtime_error((pos.str().empty() ? "" : pos.str() + ": ") +
                             (variable.empty() ? message : "variable '" + variable + "': " + message)),
          variable_(std::move(variable)), pos_(pos) {}
    const std::string& variable() const { return variable_; }
    SourcePos pos() const { return pos_; }

  private:
    std::string variable_;
    SourcePos pos_;
};

// --- analysis-side degradations -------------------------------------------

class AnalysisDegraded : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class MomentUnavailable : public AnalysisDegraded {
  public:
    MomentUnavailable(const std::string& what) : AnalysisDegraded(what) {}
};

class BasisExplosion : public AnalysisDegraded {
  public:
    explicit BasisExplosion(size_t cap)
        : AnalysisDegraded("monomial basis exceeded the cap of " + std::to_string(cap)) {}
};

class ResonanceAmbiguity : public AnalysisDegraded {
  public:
    explicit ResonanceAmbiguity(const std::string& what) : AnalysisDegraded(what) {}
};

class ClosedFormUnrepresentable : public AnalysisDegraded {
  public:
    explicit ClosedFormUnrepresentable(const std::string& what) : AnalysisDegraded(what) {}
};

class AnalysisTimeout : public AnalysisDegraded {
  public:
    AnalysisTimeout() : AnalysisDegraded("analysis timed out") {}
};

// Two proof rules produced contradictory certificates; must never happen.
class InternalSoundnessError : public std::logic_error {
  public:
    explicit InternalSoundnessError(const std::string& what) : std::logic_error(what) {}
};

class UnboundSymbol : public std::runtime_error {
  public:
    explicit UnboundSymbol(const std::string& name)
        : std::runtime_error("no binding for symbolic constant '" + name + "'"), name_(name) {}
    const std::string& name() const { return name_; }

  private:
    std::string name_;
};

} // namespace probterm
