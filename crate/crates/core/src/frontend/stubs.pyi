# Interfaces from typing and collections.abc that user code may name
# without defining.
from abc import ABCMeta, abstractmethod
from typing import Protocol, TypeVar, runtime_checkable

T_co = TypeVar("T_co", covariant=True)


class Sized(metaclass=ABCMeta):
    @abstractmethod
    def __len__(self) -> int: ...

    @classmethod
    def __subclasshook__(cls, C): ...


class Hashable(metaclass=ABCMeta):
    @abstractmethod
    def __hash__(self) -> int: ...

    @classmethod
    def __subclasshook__(cls, C): ...


@runtime_checkable
class SupportsInt(Protocol):
    @abstractmethod
    def __int__(self) -> int: ...


@runtime_checkable
class SupportsFloat(Protocol):
    @abstractmethod
    def __float__(self) -> float: ...


@runtime_checkable
class SupportsComplex(Protocol):
    @abstractmethod
    def __complex__(self) -> complex: ...


@runtime_checkable
class SupportsBytes(Protocol):
    @abstractmethod
    def __bytes__(self) -> bytes: ...


@runtime_checkable
class SupportsIndex(Protocol):
    @abstractmethod
    def __index__(self) -> int: ...


@runtime_checkable
class SupportsAbs(Protocol[T_co]):
    @abstractmethod
    def __abs__(self) -> T_co: ...
