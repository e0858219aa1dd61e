#pragma once

#include <stdexcept>
#include <string>

namespace pesc {

// Base for every error raised by this library. Callers that only need the
// coarse failure class (backend vs target vs configuration) can catch the
// grouping types below; everything carries a human-readable message.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// -- backend-side failures ---------------------------------------------------
struct BackendError : Error { using Error::Error; };
struct BackendUnreachable : BackendError { using BackendError::BackendError; };
struct ContextOverflow : BackendError { using BackendError::BackendError; };
struct MalformedResponse : BackendError { using BackendError::BackendError; };

// -- target-side failures ----------------------------------------------------
struct TargetError : Error { using Error::Error; };
struct SessionLost : TargetError { using TargetError::TargetError; };
struct CommandTimeout : TargetError { using TargetError::TargetError; };
struct ResetFailed : TargetError { using TargetError::TargetError; };
struct MalformedCapability : TargetError { using TargetError::TargetError; };

// -- data / configuration ----------------------------------------------------
struct ConfigError : Error { using Error::Error; };
struct PlanInvalid : ConfigError { using ConfigError::ConfigError; };
struct MalformedSvpFile : ConfigError { using ConfigError::ConfigError; };
struct MalformedScenarioFile : ConfigError { using ConfigError::ConfigError; };
struct MalformedTraceFile : ConfigError { using ConfigError::ConfigError; };
struct MalformedStoreFile : ConfigError { using ConfigError::ConfigError; };

// -- in-process contract violations -------------------------------------------
struct TemplateFieldMissing : Error { using Error::Error; };
struct IterationGap : Error { using Error::Error; };
struct BudgetUnreachable : Error { using Error::Error; };
struct EmptyText : Error { using Error::Error; };

} // namespace pesc
