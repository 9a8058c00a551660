#pragma once

#include <stdexcept>
#include <string>

namespace taskdiag {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define TASKDIAG_DEFINE_ERROR(Name)                                  \
    class Name : public Error {                                      \
    public:                                                          \
        explicit Name(const std::string& msg)                        \
            : Error(std::string(#Name) + ": " + msg) {}              \
    }

// stream ingestion
TASKDIAG_DEFINE_ERROR(MalformedRow);
TASKDIAG_DEFINE_ERROR(NonMonotonicTime);
TASKDIAG_DEFINE_ERROR(IrregularStep);
TASKDIAG_DEFINE_ERROR(EmptyFile);
TASKDIAG_DEFINE_ERROR(UnknownChannel);

// taskification
TASKDIAG_DEFINE_ERROR(WindowTooLong);
TASKDIAG_DEFINE_ERROR(WindowTooShort);
TASKDIAG_DEFINE_ERROR(InvalidShift);
TASKDIAG_DEFINE_ERROR(NeighborhoodEmpty);
TASKDIAG_DEFINE_ERROR(InvalidTaskification);

// distance kernel
TASKDIAG_DEFINE_ERROR(EmptyInterval);
TASKDIAG_DEFINE_ERROR(EmptyDistribution);
TASKDIAG_DEFINE_ERROR(ChannelMismatch);
TASKDIAG_DEFINE_ERROR(Downsample);
TASKDIAG_DEFINE_ERROR(DimMismatch);

// profiles
TASKDIAG_DEFINE_ERROR(TooFewTasks);
TASKDIAG_DEFINE_ERROR(KindMismatch);
TASKDIAG_DEFINE_ERROR(EmptyProfile);

// synthetic
TASKDIAG_DEFINE_ERROR(InvalidSpec);

// cl metrics
TASKDIAG_DEFINE_ERROR(MissingEntry);
TASKDIAG_DEFINE_ERROR(TooFew);

// report
TASKDIAG_DEFINE_ERROR(IoError);
TASKDIAG_DEFINE_ERROR(ConfigError);

#undef TASKDIAG_DEFINE_ERROR

}  // namespace taskdiag
