class MyList(list):
    pretty_string = lambda self: "test"

foo = MyList([1, 2, 3])  # MyListET[IntET]
bar = [MyList]  # what is the type of the class-as-value stored in bar?
