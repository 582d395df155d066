from typing import Protocol, runtime_checkable


@runtime_checkable
class MyProtocol(Protocol):
    def foo(self, x: int) -> bool: ...

class Sub1:
    def foo(self, x: float) -> int:
        return 1

class Sub2:
    def foo(self, x: str) -> int:
        return 2

class Sub3:
    def foo(self, x: int) -> bool:
        return True

def f1(x: MyProtocol):
    return None

f1(Sub3())
f1(Sub2())
print(f'Sub1 is subclass of MyProtocol: {issubclass(Sub1, MyProtocol)}')
print(f'Sub2 is subclass of MyProtocol: {issubclass(Sub2, MyProtocol)}')
print(f'Sub3 is subclass of MyProtocol: {issubclass(Sub3, MyProtocol)}')
